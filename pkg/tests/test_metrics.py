import math

import numpy as np
import pytest

from rage.image_model import ImageBuffer
from rage.metrics import (ShapeMismatchError, compression_ratio, distortion_report, mse,
                          psnr, quality_factor)


def test_compression_ratio():
    assert compression_ratio(250, 1000) == 0.25
    assert compression_ratio(1000, 1000) == 1.0
    with pytest.raises(ValueError):
        compression_ratio(10, 0)


def test_mse_and_psnr(rng):
    a = ImageBuffer.from_channels(rng.integers(0, 256, size=(5, 7, 3), dtype=np.uint8))
    assert mse(a, a) == 0 and psnr(a, a) == math.inf
    ch = a.to_channels().astype(np.int64)
    ch[0, 0, 1] = (ch[0, 0, 1] + 10) % 256
    b = ImageBuffer.from_channels(ch.astype(np.uint8))
    diff = abs(int(ch[0, 0, 1]) - int(a.to_channels()[0, 0, 1]))
    assert mse(a, b) == pytest.approx(diff ** 2 / (5 * 7 * 3))
    with pytest.raises(ShapeMismatchError):
        mse(a, ImageBuffer(5, 7, 24, np.zeros(35)))


def test_distortion_report(rng):
    a = ImageBuffer.from_channels(rng.integers(0, 256, size=(20, 13, 4), dtype=np.uint8))
    rep = distortion_report(a, a)
    assert rep.local_mse_grid.shape == (3, 2)
    assert not rep.local_mse_grid.any()
    ch = a.to_channels().copy()
    ch[9, 12, 0] ^= 0xFF
    b = ImageBuffer.from_channels(ch)
    rep = distortion_report(a, b)
    assert np.count_nonzero(rep.local_mse_grid) == 1
    assert rep.local_mse_grid[1, 1] > 0
    assert rep.weighted_mean() == pytest.approx(rep.global_mse)
    assert rep.global_mse == pytest.approx(mse(a, b))
    assert rep.p5 <= rep.p25 <= rep.p75 <= rep.p95


def test_quality_factor():
    curve = [(0.1, 50.0), (0.3, 10.0), (0.5, 2.0)]
    assert quality_factor(curve, curve, 0.2) == pytest.approx(1.0)
    assert quality_factor([(0.1, 0.0), (0.5, 0.0)], curve, 0.4) == 0.0
    assert quality_factor(curve, [(0.1, 0.0), (0.5, 0.0)], 0.4) == math.inf
    assert quality_factor([(0.1, 0.0), (0.5, 0.0)], [(0.1, 0.0), (0.5, 0.0)], 0.3) == 0.0
    assert quality_factor(curve, [(0.1, 100.0), (0.5, 4.0)], 0.5) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        quality_factor(curve, [(0.2, 1.0), (0.4, 1.0)], 0.45)


def test_mse_symmetric(rng):
    a = ImageBuffer.from_channels(rng.integers(0, 256, size=(6, 6, 4), dtype=np.uint8))
    b = ImageBuffer.from_channels(rng.integers(0, 256, size=(6, 6, 4), dtype=np.uint8))
    assert mse(a, b) == mse(b, a)
