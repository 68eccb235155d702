from rage.corpus import CONTINUOUS, DISCRETE, bundled_corpus, load_corpus, write_corpus


def test_deterministic():
    a, b = bundled_corpus(), bundled_corpus()
    assert [x.name for x in a] == [x.name for x in b]
    assert all(x.image == y.image for x, y in zip(a, b))


def test_mix(corpus):
    depths = {item.image.bpp for item in corpus}
    tones = {item.tone for item in corpus}
    assert depths == {24, 32}
    assert tones == {DISCRETE, CONTINUOUS}
    assert any(item.image.n <= 256 for item in corpus)
    assert any(item.image.n > 256 for item in corpus)


def test_write_and_load(tmp_path, corpus):
    paths = write_corpus(tmp_path)
    assert len(paths) == len(corpus)
    loaded = dict(load_corpus(tmp_path))
    for item in corpus:
        assert loaded[item.name] == item.image
