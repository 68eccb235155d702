"""Compression ratio, distortion (global and per 8x8 block) and quality factor."""

from dataclasses import dataclass
import math

import numpy as np

BLOCK = 8


class ShapeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class DistortionReport:
    global_mse: float
    local_mse_grid: np.ndarray
    block_pixels: np.ndarray
    p5: float
    p25: float
    p75: float
    p95: float

    def weighted_mean(self):
        return float((self.local_mse_grid * self.block_pixels).sum() / self.block_pixels.sum())


def compression_ratio(compressed_bytes, raw_bytes):
    """Compressed over uncompressed size; lower is better."""
    if raw_bytes <= 0:
        raise ValueError("uncompressed size must be positive")
    return compressed_bytes / raw_bytes


def _samples(original, reconstructed):
    if (original.width, original.height, original.bpp) != (
            reconstructed.width, reconstructed.height, reconstructed.bpp):
        raise ShapeMismatchError(
            f"{original!r} and {reconstructed!r} differ in shape or depth")
    a = original.to_channels().astype(np.int64)
    b = reconstructed.to_channels().astype(np.int64)
    return (a - b) ** 2


def mse(original, reconstructed):
    """Mean squared channel-sample difference (alpha included at 32 bpp)."""
    return float(_samples(original, reconstructed).mean())


def psnr(original, reconstructed, peak=255.0):
    err = mse(original, reconstructed)
    return math.inf if err == 0 else 10.0 * math.log10(peak * peak / err)


def distortion_report(original, reconstructed):
    sq = _samples(original, reconstructed).sum(axis=2)
    channels = original.channels
    h, w = sq.shape
    gh, gw = -(-h // BLOCK), -(-w // BLOCK)
    padded = np.zeros((gh * BLOCK, gw * BLOCK), dtype=np.int64)
    padded[:h, :w] = sq
    counts = np.zeros_like(padded)
    counts[:h, :w] = 1
    block_err = padded.reshape(gh, BLOCK, gw, BLOCK).sum(axis=(1, 3))
    block_pixels = counts.reshape(gh, BLOCK, gw, BLOCK).sum(axis=(1, 3))
    local = block_err / (block_pixels * channels)
    p5, p25, p75, p95 = np.percentile(local, [5, 25, 75, 95])
    return DistortionReport(
        global_mse=float(sq.sum() / (h * w * channels)),
        local_mse_grid=local,
        block_pixels=block_pixels,
        p5=float(p5), p25=float(p25), p75=float(p75), p95=float(p95),
    )


def _interp(curve, cr):
    curve = sorted(curve)
    xs = [c for c, _ in curve]
    ys = [m for _, m in curve]
    return float(np.interp(cr, xs, ys))


def quality_factor(curve_a, curve_b, cr):
    """MSE ratio of curve ``a`` to curve ``b`` at compression ratio ``cr``.

    Each curve is a list of ``(CR, MSE)`` points, interpolated linearly.
    Returns ``inf`` when only ``b`` reaches zero distortion, and 0 when both do.
    """
    if not curve_a or not curve_b:
        raise ValueError("both curves need at least one point")
    lo = max(min(c for c, _ in curve_a), min(c for c, _ in curve_b))
    hi = min(max(c for c, _ in curve_a), max(c for c, _ in curve_b))
    if not lo <= cr <= hi:
        raise ValueError(f"CR {cr} outside the curves' overlap [{lo}, {hi}]")
    a = _interp(curve_a, cr)
    b = _interp(curve_b, cr)
    if b == 0:
        return 0.0 if a == 0 else math.inf
    return a / b
