"""Greedy base-bit selection with optional BaseTree pruning.

Starting from the constant bits, one bit position is added per step: the
one that splits the fewest BaseTree leaves (lowest position on ties).  The
estimated compressed size is evaluated after every step and the smallest
configuration seen is returned.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .basetree import BaseTree
from .gd_transform import BitSelection
from .rle import rle_encode
from . import size_model


@dataclass(frozen=True)
class RageConfig:
    selection: BitSelection
    n_b: int
    l_id: int
    psnr_thr: float | None
    estimated_size: int
    trace: tuple = field(default=(), compare=False)
    """``(bit position, estimated size)`` for every greedy step."""

    @property
    def lossy(self):
        return self.psnr_thr is not None and math.isfinite(self.psnr_thr)


def id_width(n_b):
    if n_b < 1:
        raise ValueError("a base dictionary holds at least one base")
    return (n_b - 1).bit_length()


def find_constant_bits(chunks, chunk_bits=None):
    """Bit positions at which every chunk agrees."""
    chunks = np.asarray(chunks, dtype=np.uint64).reshape(-1)
    if chunks.size == 0:
        raise ValueError("no chunks given")
    if chunk_bits is None:
        chunk_bits = max(int(np.bitwise_or.reduce(chunks)).bit_length(), 1)
    ones = int(np.bitwise_or.reduce(chunks))
    alls = int(np.bitwise_and.reduce(chunks))
    varying = ones ^ alls
    return {p for p in range(chunk_bits) if not varying >> p & 1}


def _row_sequences(chunks, width):
    rows = np.asarray(chunks).reshape(-1, width)
    return [rle_encode(row.tolist()) for row in rows]


def _rle_totals(sequences):
    return size_model.s_rle(sequences), size_model.n_pairs(sequences)


def _estimate(tree, chunk_bits, height, rle_totals):
    n_b = tree.n_b
    l_b = tree.height
    rle_bits, pair_count = rle_totals
    return size_model.breakdown(n_b, l_b, id_width(n_b), chunk_bits - l_b,
                                height, rle_bits, pair_count).total_bits


def build_tree(chunks, positions, psnr_thr=None, t=7):
    """Replay expansion (and pruning) of ``positions`` in order."""
    tree = BaseTree(chunks)
    for pos in positions:
        tree.expand(pos)
        if psnr_thr is not None:
            tree.prune_level(pos, psnr_thr, t)
    return tree


def select_base_bits(img, psnr_thr=None):
    """Run the greedy selection on ``img``; returns ``(RageConfig, BaseTree)``.

    ``psnr_thr=None`` never prunes.  Any other value (``math.inf`` included)
    prunes after every expansion, so ``inf`` exercises the pruning path
    without ever performing a mapping.
    """
    chunk_bits = img.bpp
    chunks = img.pixels.astype(np.uint64)
    width, height = img.width, img.height
    pruning = psnr_thr is not None

    constants = sorted(find_constant_bits(chunks, chunk_bits), reverse=True)
    tree = build_tree(chunks, constants, psnr_thr)
    chosen = list(constants)

    # runs of equal (id, d) pairs are runs of equal effective chunks, so the
    # RLE layout only changes when pruning flips bits
    rle_totals = _rle_totals(_row_sequences(tree.effective, width))
    best_positions, best_size = list(chosen), math.inf
    trace = []
    while len(chosen) < chunk_bits:
        candidates = [p for p in range(chunk_bits) if p not in chosen]
        counts = [tree.count_new_bases(p) for p in candidates]
        pos = candidates[int(np.argmin(counts))]
        tree.expand(pos)
        if pruning and tree.prune_level(pos, psnr_thr):
            rle_totals = _rle_totals(_row_sequences(tree.effective, width))
        chosen.append(pos)
        size = _estimate(tree, chunk_bits, height, rle_totals)
        trace.append((pos, size))
        if size < best_size:
            best_positions, best_size = list(chosen), size

    if len(best_positions) != len(chosen):
        tree = build_tree(chunks, best_positions, psnr_thr)
    if best_size == math.inf:
        # the loop never ran: every bit is constant
        best_size = _estimate(tree, chunk_bits, height,
                              _rle_totals(_row_sequences(tree.effective, width)))
    config = RageConfig(
        selection=BitSelection(tuple(best_positions), chunk_bits),
        n_b=tree.n_b,
        l_id=id_width(tree.n_b),
        psnr_thr=psnr_thr,
        estimated_size=int(best_size),
        trace=tuple(trace),
    )
    return config, tree
