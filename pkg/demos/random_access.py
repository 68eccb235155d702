"""
Decoding a region without decompressing the image
=================================================

Every row stores where its RLE values and pairs start, so a rectangle can
be decoded by touching only the rows it covers and, inside each row, only
the pairs from its first column onward.
"""

# %%
from rage import bundled_corpus, crop, decode, encode, measure_access, query

item = next(c for c in bundled_corpus() if c.name == "ui_panel_64x40")
comp = encode(item.image)

# %%
# Query a 12x6 block and compare it with the same block cut out of a full
# decode.  ``reads`` collects the bit position of every pair that was fetched.
reads = []
block = query(comp, (40, 12, 12, 6), reads)
assert block == crop(decode(comp), 40, 12, 12, 6)
print(f"decoded {block.n} pixels from {len(reads)} pair records "
      f"(the image has {comp.pair_bits // comp.pair_width})")

# %%
# The cost of a query splits into seeking (locating the first column of each
# row) and decoding.  Sweeping the query width from 1 to the image width
# gives the average cost per pixel of each phase.
stats = measure_access(comp, repeats=3)
print(f"seek {stats.avg_seek_ns:.0f} ns/pixel, decode {stats.avg_dtpp_ns:.0f} ns/pixel")
