"""Alternating run / different-group RLE with 4- and 8-bit value packets.

A row is described by stored values ``(r1, m1, r2, m2, ...)``.  ``r`` is a
biased run length (stored ``run - 1``; 0 means "no run here") whose single
symbol goes to the symbol stream, ``m`` counts the following symbols that
are each stored individually.  Stored values never exceed 135: longer runs
are split as ``r=135, m=0, ...`` and longer groups as ``m=135, r=0, ...``.

Packets: ``v < 8`` is ``0vvv``; ``8 <= v <= 135`` is ``1`` followed by
``v - 8`` in 7 bits.
"""

from dataclasses import dataclass

from .bitstream import read_bits
from .errors import CorruptStreamError, TruncatedStreamError

MAX_VALUE = 135
MAX_RUN = MAX_VALUE + 1
SHORT_LIMIT = 8


@dataclass(frozen=True)
class RleSequence:
    values: tuple
    symbols: tuple

    @property
    def coverage(self):
        return coverage(self.values)

    @property
    def n_pairs(self):
        return len(self.symbols)


def coverage(values):
    """Number of row columns described by a stored value sequence."""
    total = 0
    for k in range(0, len(values) - 1, 2):
        r, m = values[k], values[k + 1]
        total += (r + 1 if r else 0) + m
    return total


def rle_encode(row):
    """Encode a nonempty row of comparable symbols."""
    row = list(row)
    n = len(row)
    if n == 0:
        raise ValueError("cannot run-length encode an empty row")
    values = []
    symbols = []
    i = 0
    while i < n:
        run = 1
        while i + run < n and row[i + run] == row[i]:
            run += 1
        if run >= 2:
            take = min(run, MAX_RUN)
            values.append(take - 1)
            symbols.append(row[i])
            i += take
            if take < run:
                values.append(0)
                continue
        else:
            values.append(0)
        # group of symbols that do not start a run
        group = 0
        while i < n and (i + 1 == n or row[i + 1] != row[i]):
            if group == MAX_VALUE:
                values.append(group)
                values.append(0)
                group = 0
            symbols.append(row[i])
            group += 1
            i += 1
        values.append(group)
    return RleSequence(tuple(values), tuple(symbols))


def iter_elements(values):
    """Yield ``(columns, symbols, is_run)`` for every nonempty run or group."""
    if len(values) % 2:
        raise CorruptStreamError("RLE value sequence has odd length")
    for k, v in enumerate(values):
        if v > MAX_VALUE or v < 0:
            raise CorruptStreamError(f"stored RLE value {v} outside 0..{MAX_VALUE}")
        if k % 2 == 0:
            if v:
                yield v + 1, 1, True
        elif v:
            yield v, v, False


def rle_decode(seq, width):
    if seq.coverage != width:
        raise CorruptStreamError(
            f"RLE sequence covers {seq.coverage} columns, expected {width}")
    out = []
    symbols = iter(seq.symbols)
    try:
        for columns, _, is_run in iter_elements(seq.values):
            if is_run:
                out.extend([next(symbols)] * columns)
            else:
                out.extend(next(symbols) for _ in range(columns))
    except StopIteration:
        raise CorruptStreamError("RLE symbol stream too short") from None
    if next(symbols, _END) is not _END:
        raise CorruptStreamError("RLE symbol stream has leftover symbols")
    return out


_END = object()


@dataclass(frozen=True)
class Cursor:
    """Position of a column inside a value sequence.

    ``element`` indexes ``values``; ``offset`` is the column's distance from
    the start of that run or group.
    """

    element: int
    offset: int


def skip_to(seq, x):
    """Count the symbols needed before column ``x`` without touching the symbols."""
    values = seq.values if isinstance(seq, RleSequence) else tuple(seq)
    if x < 0:
        raise IndexError(f"column {x} out of range")
    column = 0
    pairs = 0
    for k, v in enumerate(values):
        if k % 2 == 0:
            if not v:
                continue
            span = v + 1
            if x < column + span:
                return pairs, Cursor(k, x - column)
            pairs += 1
        else:
            if x < column + v:
                return pairs + (x - column), Cursor(k, x - column)
            pairs += v
            span = v
        column += span
    raise IndexError(f"column {x} beyond row coverage {column}")


# --- packets ----------------------------------------------------------------

def packet_size(v):
    if not 0 <= v <= MAX_VALUE:
        raise ValueError(f"RLE value {v} outside 0..{MAX_VALUE}")
    return 4 if v < SHORT_LIMIT else 8


def pack_value(v):
    """Return ``(packet, nbits)`` for a stored value."""
    if packet_size(v) == 4:
        return v, 4
    return 0x80 | (v - SHORT_LIMIT), 8


def unpack_at(data, pos, limit):
    """Read the packet at bit ``pos``; returns ``(value, next position)``."""
    if pos + 8 <= limit:
        byte = read_bits(data, pos, 8, limit)
        if byte & 0x80:
            return SHORT_LIMIT + (byte & 0x7F), pos + 8
        return byte >> 4, pos + 4
    nibble = read_bits(data, pos, 4, limit)
    if nibble >= SHORT_LIMIT:
        raise TruncatedStreamError("RLE stream exhausted mid-packet")
    return nibble, pos + 4


def unpack_value(reader):
    """Read one packet from a :class:`~rage.bitstream.BitReader`.

    Returns ``(value, consumed_bits)``.
    """
    try:
        value, end = unpack_at(reader.data, reader.pos, reader.limit)
    except TruncatedStreamError:
        raise TruncatedStreamError("RLE stream exhausted mid-packet") from None
    consumed = end - reader.pos
    reader.pos = end
    return value, consumed


def write_values(values, writer):
    for v in values:
        packet, nbits = pack_value(v)
        writer.write(packet, nbits)


def read_row_values(reader, width):
    """Read ``(r, m)`` value pairs until exactly ``width`` columns are covered."""
    values = []
    column = 0
    while column < width:
        r, _ = unpack_value(reader)
        m, _ = unpack_value(reader)
        column += (r + 1 if r else 0) + m
        values.append(r)
        values.append(m)
    if column != width:
        raise CorruptStreamError(f"RLE row covers {column} columns, expected {width}")
    return values
