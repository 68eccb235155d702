"""Bit-partition transform splitting chunks into bases and deviations.

The base collects the chunk bits at the selected positions in *selection
order* (first selected = most significant base bit).  The deviation holds
the remaining bits in descending position order.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BitSelection:
    positions: tuple
    chunk_bits: int

    def __post_init__(self):
        positions = tuple(int(p) for p in self.positions)
        if len(set(positions)) != len(positions):
            raise ValueError(f"duplicate base bit positions in {positions}")
        for p in positions:
            if not 0 <= p < self.chunk_bits:
                raise ValueError(f"bit position {p} outside chunk of {self.chunk_bits} bits")
        object.__setattr__(self, "positions", positions)

    @property
    def base_bits(self):
        return len(self.positions)

    @property
    def deviation_bits(self):
        return self.chunk_bits - len(self.positions)

    @property
    def deviation_positions(self):
        chosen = set(self.positions)
        return tuple(p for p in range(self.chunk_bits - 1, -1, -1) if p not in chosen)


def _gather(chunk, positions):
    value = 0
    for p in positions:
        value = (value << 1) | ((chunk >> p) & 1)
    return value


def _scatter(value, positions):
    chunk = 0
    nbits = len(positions)
    for k, p in enumerate(positions):
        chunk |= ((value >> (nbits - 1 - k)) & 1) << p
    return chunk


def split(chunk, sel):
    """Return ``(base, deviation)`` for one chunk."""
    chunk = int(chunk)
    if chunk >> sel.chunk_bits:
        raise ValueError(f"chunk wider than {sel.chunk_bits} bits")
    return _gather(chunk, sel.positions), _gather(chunk, sel.deviation_positions)


def merge(base, deviation, sel):
    """Inverse of :func:`split`."""
    base, deviation = int(base), int(deviation)
    if base < 0 or base >> sel.base_bits:
        raise ValueError(f"base {base} wider than {sel.base_bits} bits")
    if deviation < 0 or deviation >> sel.deviation_bits:
        raise ValueError(f"deviation {deviation} wider than {sel.deviation_bits} bits")
    return _scatter(base, sel.positions) | _scatter(deviation, sel.deviation_positions)


def gather_array(chunks, positions):
    """Vectorised :func:`_gather` over a uint array of chunks."""
    chunks = np.asarray(chunks, dtype=np.uint64)
    out = np.zeros(chunks.shape, dtype=np.uint64)
    for p in positions:
        out = (out << np.uint64(1)) | ((chunks >> np.uint64(p)) & np.uint64(1))
    return out


def split_array(chunks, sel):
    return gather_array(chunks, sel.positions), gather_array(chunks, sel.deviation_positions)


def scatter_array(values, positions):
    values = np.asarray(values, dtype=np.uint64)
    out = np.zeros(values.shape, dtype=np.uint64)
    nbits = len(positions)
    for k, p in enumerate(positions):
        out |= ((values >> np.uint64(nbits - 1 - k)) & np.uint64(1)) << np.uint64(p)
    return out


def merge_array(bases, deviations, sel):
    """Vectorised :func:`merge`; inputs are assumed to fit their widths."""
    return scatter_array(bases, sel.positions) | scatter_array(deviations, sel.deviation_positions)


class Scatter:
    """Table-driven scatter of packed bits back to their chunk positions.

    Splits the packed value into bytes and ORs one 256-entry table per byte,
    which is what makes per-pixel merging cheap during decoding.
    """

    def __init__(self, positions):
        self.positions = tuple(positions)
        nbits = len(self.positions)
        self.tables = []
        for shift in range(0, nbits, 8):
            width = min(8, nbits - shift)
            # value bit j (LSB-first) goes to positions[nbits - 1 - j]
            targets = [self.positions[nbits - 1 - (shift + j)] for j in range(width)]
            table = []
            for byte in range(1 << width):
                word = 0
                for j, p in enumerate(targets):
                    if byte >> j & 1:
                        word |= 1 << p
                table.append(word)
            self.tables.append((shift, table))

    def __call__(self, value):
        word = 0
        for shift, table in self.tables:
            word |= table[(value >> shift) & 0xFF]
        return word


class Merger:
    """Precomputed :func:`merge` for a fixed selection."""

    def __init__(self, sel):
        self.sel = sel
        self.base = Scatter(sel.positions)
        self.deviation = Scatter(sel.deviation_positions)

    def __call__(self, base, deviation):
        return self.base(base) | self.deviation(deviation)
