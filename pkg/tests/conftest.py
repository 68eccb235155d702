import numpy as np
import pytest

from rage.corpus import bundled_corpus
from rage.image_model import ImageBuffer


def random_image(rng, width, height, alphabet, bpp=24):
    """Image whose pixels are drawn from ``alphabet`` distinct random chunks."""
    top = 1 << bpp
    palette = np.unique(rng.integers(0, top, size=alphabet * 2 + 8, dtype=np.uint64))
    rng.shuffle(palette)
    palette = palette[:alphabet]
    pixels = palette[rng.integers(0, palette.size, size=width * height)]
    return ImageBuffer(width, height, bpp, pixels.astype(np.uint32))


def chunks_image(chunks, width=None, bpp=24):
    chunks = np.asarray(chunks, dtype=np.uint32)
    width = width or chunks.size
    return ImageBuffer(width, chunks.size // width, bpp, chunks)


@pytest.fixture(scope="session")
def corpus():
    return bundled_corpus()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
