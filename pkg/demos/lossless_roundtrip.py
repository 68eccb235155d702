"""
Lossless compression of the bundled corpus
==========================================

Encode every bundled image, check that decoding gives the original back and
look at where the bits go.
"""

# %%
# The corpus is generated deterministically, so no files are needed.
from rage import bundled_corpus, decode, deserialize, encode, serialize

corpus = bundled_corpus()

# %%
# ``encode`` picks the base bits greedily and builds the container.  The
# size breakdown splits the payload into dictionary, RLE values, (id, d)
# pairs and row offsets.
print(f"{'image':18} {'bpp':>3} {'n_b':>5} {'l_b':>3} {'CR':>7}  dict/rle/pairs/offsets")
for item in corpus:
    img = item.image
    comp = encode(img)
    data = serialize(comp)
    assert decode(deserialize(data)) == img
    s = comp.sizes
    print(f"{item.name:18} {img.bpp:>3} {comp.n_b:>5} {comp.l_b:>3} "
          f"{len(data) / img.raw_bytes:7.3f}  "
          f"{s.dict_bits}/{s.rle_bits}/{s.pair_bits}/{s.offset_bits}")

# %%
# Flat graphics end up with a handful of bases and long runs; the noise
# image has nothing to deduplicate and grows slightly past its raw size.
