"""Rectangular queries on a compressed image without full decompression.

A query runs in two phases per row.  *Seek* reads the row offsets and
accumulates RLE values, ignoring symbols, just until the pair-stream
position of the first query column is known.  *Decode* continues through the RLE values
of the query span, fetching exactly the pairs it covers and merging them
with their dictionary bases.
"""

from dataclasses import dataclass
import time
from typing import NamedTuple

import numpy as np

from .errors import CorruptStreamError
from .image_model import ImageBuffer
from .rle import unpack_at


@dataclass(frozen=True)
class QueryRect:
    x: int
    y: int
    w: int
    h: int

    def check(self, width, height):
        if self.x < 0 or self.y < 0 or self.w < 1 or self.h < 1:
            raise IndexError(f"invalid query rect {self}")
        if self.x + self.w > width or self.y + self.h > height:
            raise IndexError(f"query rect {self} exceeds {width}x{height} image")


@dataclass
class AccessStats:
    seek_ns_total: int = 0
    pixels_seeked: int = 0
    decode_ns_total: int = 0
    pixels_decoded: int = 0

    @property
    def avg_seek_ns(self):
        return self.seek_ns_total / self.pixels_seeked if self.pixels_seeked else None

    @property
    def avg_dtpp_ns(self):
        return self.decode_ns_total / self.pixels_decoded if self.pixels_decoded else None


class RowCursor(NamedTuple):
    """Decoder state at the first query column of a row.

    ``pair_pos`` is the bit position of the pair covering that column and
    ``rle_pos`` the next unread RLE packet.  Inside a run, ``run_left``
    counts the run's remaining columns; inside a group, ``group_left``
    counts its remaining members.  When both are zero the column starts a
    new element and ``m_next`` tells whether the next packet is an ``m``.
    """

    rle_pos: int
    pair_pos: int
    run_left: int
    group_left: int
    m_next: bool


def seek_row(comp, y, x):
    """Read row ``y``'s offsets and accumulate RLE values up to column ``x``.

    Only the packets of elements ending at or before ``x``, plus the one
    containing ``x``, are read.
    """
    pair_pos, pos = comp.row_offsets(y)
    data, limit = comp.rle_stream, comp.rle_bits
    step = comp.pair_width
    column = 0
    while column < comp.width:
        if column == x:
            return RowCursor(pos, pair_pos, 0, 0, False)
        r, pos = unpack_at(data, pos, limit)
        if r:
            column += r + 1
            if x < column:
                return RowCursor(pos, pair_pos, column - x, 0, True)
            pair_pos += step
            if column == x:
                return RowCursor(pos, pair_pos, 0, 0, True)
        m, pos = unpack_at(data, pos, limit)
        if x < column + m:
            return RowCursor(pos, pair_pos + (x - column) * step, 0, column + m - x, False)
        column += m
        pair_pos += m * step
    raise CorruptStreamError(f"row {y} RLE ends before column {x}")


def decode_span(comp, cursor, w, reads=None):
    """Decode ``w`` columns starting at a :func:`seek_row` cursor."""
    data, limit = comp.rle_stream, comp.rle_bits
    step = comp.pair_width
    read_pair = comp.read_pair
    pos, pair_pos, run_left, group_left, m_next = cursor
    out = []
    need = w
    while need:
        if run_left:
            take = min(run_left, need)
            if reads is not None:
                reads.append(pair_pos)
            out.extend([read_pair(pair_pos)] * take)
            pair_pos += step
            need -= take
            run_left = 0
            m_next = True
        elif group_left:
            take = min(group_left, need)
            if reads is not None:
                reads.extend(range(pair_pos, pair_pos + take * step, step))
            out.extend([read_pair(pair_pos + j * step) for j in range(take)])
            pair_pos += take * step
            need -= take
            group_left = 0
            m_next = False
        elif m_next:
            group_left, pos = unpack_at(data, pos, limit)
            m_next = False
        else:
            r, pos = unpack_at(data, pos, limit)
            run_left = r + 1 if r else 0
            m_next = True
    return out


def _run_query(comp, rect, reads):
    clock = time.perf_counter_ns
    t0 = clock()
    cursors = [seek_row(comp, y, rect.x) for y in range(rect.y, rect.y + rect.h)]
    t1 = clock()
    pixels = []
    for cursor in cursors:
        pixels.extend(decode_span(comp, cursor, rect.w, reads))
    block = ImageBuffer(rect.w, rect.h, comp.bpp, np.array(pixels, dtype=np.uint32))
    t2 = clock()
    return block, t1 - t0, t2 - t1


def query(comp, rect, reads=None):
    """Decode only ``rect`` of ``comp``.

    When ``reads`` is a list, the bit position of every fetched pair is
    appended to it.
    """
    if not isinstance(rect, QueryRect):
        rect = QueryRect(*rect)
    rect.check(comp.width, comp.height)
    return _run_query(comp, rect, reads)[0]


def _timed_query(comp, width, stats):
    _, seek_ns, decode_ns = _run_query(comp, QueryRect(0, 0, width, comp.height), None)
    count = width * comp.height
    stats.seek_ns_total += seek_ns
    stats.decode_ns_total += decode_ns
    stats.pixels_seeked += count
    stats.pixels_decoded += count


def measure_access(comp, widths=None, warmup=3, repeats=1):
    """Time a sweep of full-height queries anchored at the left-most column.

    The default sweep grows the query one column at a time until it covers
    the whole image.  ``warmup`` untimed queries run first; the timed sweep
    is run ``repeats`` times and accumulated.
    """
    widths = list(range(1, comp.width + 1) if widths is None else widths)
    for width in widths:
        QueryRect(0, 0, width, comp.height).check(comp.width, comp.height)
    stats = AccessStats()
    if not widths:
        return stats
    for k in range(warmup):
        _timed_query(comp, widths[k % len(widths)], AccessStats())
    for _ in range(repeats):
        for width in widths:
            _timed_query(comp, width, stats)
    return stats


def sweep_repeats(comp, min_pixels=20000):
    """Repeat count giving at least ``min_pixels`` timed pixels per sweep."""
    per_sweep = comp.height * comp.width * (comp.width + 1) // 2
    return max(1, -(-min_pixels // per_sweep))
