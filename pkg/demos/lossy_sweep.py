"""
Trading distortion for size with base tree pruning
==================================================

With a PSNR threshold the encoder may merge small leaves of the base tree
into their siblings, flipping one bit in the affected pixels.  Lower
thresholds allow costlier merges.
"""

# %%
import math

from rage import bundled_corpus, decode, encode, serialize
from rage.metrics import distortion_report

item = next(c for c in bundled_corpus() if c.name == "photo_like_32")
img = item.image

# %%
# ``inf`` never accepts a mapping, so it reproduces the lossless stream.
for thr in (math.inf, 50, 40, 30, 20):
    comp = encode(img, thr)
    report = distortion_report(img, decode(comp))
    cr = len(serialize(comp)) / img.raw_bytes
    print(f"thr={thr:>4}  n_b={comp.n_b:4}  CR={cr:.3f}  MSE={report.global_mse:8.3f}  "
          f"8x8 p95={report.p95:8.3f}")

# %%
# The local 8x8 map shows where the flips landed.
report = distortion_report(img, decode(encode(img, 20)))
for row in report.local_mse_grid:
    print(" ".join(f"{v:7.1f}" for v in row))
