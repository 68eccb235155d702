"""The ``.rage`` container: header, base dictionary, row offsets, RLE and pair streams.

Byte layout (multi-byte fields little-endian)::

    "RAGE" | version u8 | flags u8 | width u16 | height u16 | l_b u8
    | selection: l_b x u8 (bit positions, selection order)
    | n_b u32 | rle_bits u32 | pair_bits u32
    | dictionary | offsets | rle stream | pair stream

``flags`` bit 0 marks 32 bpp, bit 1 marks a lossy encode.  Each section
starts on a byte boundary and is MSB-first inside; padding bits are zero.
``offsets`` holds one ``(pair offset, rle offset)`` record per row, the
widths given by :func:`rage.size_model.offset_width`.  A pair is the base
ID (``l_id`` bits) followed by the deviation (``l_d`` bits).
"""

from dataclasses import dataclass, field
import struct

import numpy as np

from .bitstream import BitReader, BitWriter, read_bits
from .configurator import id_width, select_base_bits
from .errors import (
    BadMagicError,
    CorruptStreamError,
    HeaderLimitError,
    RageFormatError,
    TruncatedStreamError,
    UnsupportedVersionError,
)
from .gd_transform import BitSelection, Merger, split_array
from .image_model import MAX_DIMENSION, ImageBuffer
from .rle import read_row_values, rle_encode, write_values
from .size_model import SizeBreakdown, offset_width

MAGIC = b"RAGE"
VERSION = 1
FLAG_BPP32 = 0x01
FLAG_LOSSY = 0x02
_FIXED = struct.Struct("<4sBBHHB")
_COUNTS = struct.Struct("<III")
_U32_MAX = 2**32 - 1


def _nbytes(bits):
    return (bits + 7) // 8


@dataclass(frozen=True, eq=False)
class CompressedImage:
    width: int
    height: int
    bpp: int
    lossy: bool
    selection: BitSelection
    dictionary: tuple
    rle_bits: int
    pair_bits: int
    offsets: bytes
    rle_stream: bytes
    pair_stream: bytes
    measured_bits: SizeBreakdown | None = field(default=None, compare=False)
    """Section bit counts as emitted by the encoder (``None`` after deserializing)."""

    def __post_init__(self):
        setattr_ = object.__setattr__
        setattr_(self, "dictionary", tuple(self.dictionary))
        l_d = self.selection.deviation_bits
        wp, wr = offset_width(self.pair_bits), offset_width(self.rle_bits)
        setattr_(self, "_l_d", l_d)
        setattr_(self, "_dev_mask", (1 << l_d) - 1)
        setattr_(self, "_pair_width", id_width(len(self.dictionary)) + l_d)
        setattr_(self, "_wp", wp)
        setattr_(self, "_wr", wr)
        setattr_(self, "_offset_bits", self.height * (wp + wr))
        merger = Merger(self.selection)
        setattr_(self, "merger", merger)
        setattr_(self, "base_words", [merger.base(b) for b in self.dictionary])
        setattr_(self, "_scatter_dev", merger.deviation)

    @property
    def n_b(self):
        return len(self.dictionary)

    @property
    def l_b(self):
        return self.selection.base_bits

    @property
    def l_d(self):
        return self._l_d

    @property
    def l_id(self):
        return id_width(self.n_b)

    @property
    def pair_width(self):
        return self._pair_width

    @property
    def pair_offset_width(self):
        return self._wp

    @property
    def rle_offset_width(self):
        return self._wr

    @property
    def offset_bits(self):
        return self._offset_bits

    @property
    def sizes(self):
        return SizeBreakdown(self.n_b * self.l_b, self.rle_bits, self.pair_bits,
                             self.offset_bits)

    @property
    def payload_bits(self):
        return self.sizes.total_bits

    def row_offsets(self, y):
        """``(pair offset, rle offset)`` of row ``y``, in bits."""
        if not 0 <= y < self.height:
            raise IndexError(f"row {y} out of range")
        wr = self._wr
        record = read_bits(self.offsets, y * (self._wp + wr), self._wp + wr,
                           self._offset_bits)
        return record >> wr, record & ((1 << wr) - 1)

    def read_pair(self, pos):
        """Read the pair at bit ``pos``; returns the merged chunk."""
        word = read_bits(self.pair_stream, pos, self._pair_width, self.pair_bits)
        base_id = word >> self._l_d
        if base_id >= len(self.base_words):
            raise CorruptStreamError(f"base ID {base_id} >= dictionary size {self.n_b}")
        return self.base_words[base_id] | self._scatter_dev(word & self._dev_mask)


# --- encoding ---------------------------------------------------------------

def encode(img, psnr_thr=None):
    """Compress ``img``; ``psnr_thr=None`` (or ``inf``) is lossless."""
    if img.width > MAX_DIMENSION or img.height > MAX_DIMENSION:
        raise HeaderLimitError("image dimensions exceed 16-bit header fields")
    config, tree = select_base_bits(img, psnr_thr)
    sel = config.selection
    effective = tree.effective
    dictionary, assignment = tree.enumerate_bases()
    bases, deviations = split_array(effective, sel)
    if not np.array_equal(np.asarray(dictionary, dtype=np.uint64)[assignment], bases):
        raise AssertionError("BaseTree leaf prefixes disagree with split bases")

    l_d = sel.deviation_bits
    l_id = config.l_id
    pairs = (assignment.astype(np.uint64) << np.uint64(l_d)) | deviations
    rows = pairs.reshape(img.height, img.width)

    rle_writer = BitWriter()
    pair_writer = BitWriter()
    row_starts = []
    for row in rows:
        row_starts.append((pair_writer.bit_length, rle_writer.bit_length))
        seq = rle_encode(row.tolist())
        write_values(seq.values, rle_writer)
        for symbol in seq.symbols:
            pair_writer.write(symbol, l_id + l_d)

    rle_bits = rle_writer.bit_length
    pair_bits = pair_writer.bit_length
    if max(rle_bits, pair_bits, len(dictionary)) > _U32_MAX:
        raise HeaderLimitError("stream sizes exceed 32-bit header fields")

    # offset widths depend on the final stream sizes, hence the second pass
    wp, wr = offset_width(pair_bits), offset_width(rle_bits)
    offset_writer = BitWriter()
    for pair_pos, rle_pos in row_starts:
        offset_writer.write(pair_pos, wp)
        offset_writer.write(rle_pos, wr)

    dict_writer = BitWriter()
    for base in dictionary:
        dict_writer.write(base, sel.base_bits)

    measured = SizeBreakdown(dict_writer.bit_length, rle_bits, pair_bits,
                             offset_writer.bit_length)
    comp = CompressedImage(
        width=img.width, height=img.height, bpp=img.bpp, lossy=config.lossy,
        selection=sel, dictionary=tuple(dictionary), rle_bits=rle_bits,
        pair_bits=pair_bits, offsets=offset_writer.getvalue(),
        rle_stream=rle_writer.getvalue(), pair_stream=pair_writer.getvalue(),
        measured_bits=measured,
    )
    return comp


# --- decoding ---------------------------------------------------------------

def decode_row(comp, y, rle_reader=None, pair_pos=None):
    pair_offset, rle_offset = comp.row_offsets(y)
    if rle_reader is None:
        rle_reader = BitReader(comp.rle_stream, comp.rle_bits, rle_offset)
    elif rle_reader.pos != rle_offset:
        raise CorruptStreamError(f"row {y} RLE offset {rle_offset} != {rle_reader.pos}")
    if pair_pos is None:
        pair_pos = pair_offset
    elif pair_pos != pair_offset:
        raise CorruptStreamError(f"row {y} pair offset {pair_offset} != {pair_pos}")

    values = read_row_values(rle_reader, comp.width)
    step = comp.pair_width
    out = []
    for k, v in enumerate(values):
        if k % 2 == 0:
            if v:
                out.extend([comp.read_pair(pair_pos)] * (v + 1))
                pair_pos += step
        else:
            for _ in range(v):
                out.append(comp.read_pair(pair_pos))
                pair_pos += step
    return out, pair_pos


def decode(comp):
    """Full decompression; checks every row offset against the streams."""
    rle_reader = BitReader(comp.rle_stream, comp.rle_bits)
    pair_pos = 0
    pixels = []
    for y in range(comp.height):
        row, pair_pos = decode_row(comp, y, rle_reader, pair_pos)
        pixels.extend(row)
    if rle_reader.pos != comp.rle_bits:
        raise CorruptStreamError("RLE stream has trailing data")
    if pair_pos != comp.pair_bits:
        raise CorruptStreamError("pair stream has trailing data")
    return ImageBuffer(comp.width, comp.height, comp.bpp,
                       np.array(pixels, dtype=np.uint32))


# --- serialization ----------------------------------------------------------

def serialize(comp):
    flags = (FLAG_BPP32 if comp.bpp == 32 else 0) | (FLAG_LOSSY if comp.lossy else 0)
    dict_writer = BitWriter()
    for base in comp.dictionary:
        dict_writer.write(base, comp.l_b)
    parts = [
        _FIXED.pack(MAGIC, VERSION, flags, comp.width, comp.height, comp.l_b),
        bytes(comp.selection.positions),
        _COUNTS.pack(comp.n_b, comp.rle_bits, comp.pair_bits),
        dict_writer.getvalue(),
        comp.offsets[:_nbytes(comp.offset_bits)],
        comp.rle_stream[:_nbytes(comp.rle_bits)],
        comp.pair_stream[:_nbytes(comp.pair_bits)],
    ]
    return b"".join(parts)


def deserialize(data):
    """Parse container bytes, validating every header field against the buffer."""
    data = bytes(data)
    if len(data) < _FIXED.size:
        raise TruncatedStreamError("buffer shorter than the container header")
    magic, version, flags, width, height, l_b = _FIXED.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported container version {version}")
    if flags & ~(FLAG_BPP32 | FLAG_LOSSY):
        raise RageFormatError(f"unknown flag bits 0x{flags:02x}")
    bpp = 32 if flags & FLAG_BPP32 else 24
    if width == 0 or height == 0:
        raise RageFormatError("zero image dimension")
    if l_b > bpp:
        raise RageFormatError(f"l_b {l_b} exceeds chunk width {bpp}")
    pos = _FIXED.size
    if len(data) < pos + l_b + _COUNTS.size:
        raise TruncatedStreamError("buffer shorter than the container header")
    positions = tuple(data[pos:pos + l_b])
    pos += l_b
    try:
        selection = BitSelection(positions, bpp)
    except ValueError as exc:
        raise RageFormatError(f"invalid base bit selection: {exc}") from None
    n_b, rle_bits, pair_bits = _COUNTS.unpack_from(data, pos)
    pos += _COUNTS.size
    if n_b == 0:
        raise RageFormatError("empty base dictionary")
    if n_b > width * height or (l_b < 64 and n_b > 1 << l_b):
        raise RageFormatError(f"dictionary size {n_b} impossible for this image")

    pair_width = id_width(n_b) + bpp - l_b
    offset_bits = height * (offset_width(pair_bits) + offset_width(rle_bits))
    sections = [_nbytes(n_b * l_b), _nbytes(offset_bits), _nbytes(rle_bits),
                _nbytes(pair_bits)]
    if pos + sum(sections) != len(data):
        raise TruncatedStreamError(
            f"declared sections need {pos + sum(sections)} bytes, buffer has {len(data)}")
    # every row holds at least one (r, m) pair and at least one pair record
    if rle_bits < 8 * height or pair_bits < pair_width * height:
        raise CorruptStreamError("streams too short for the image height")
    if pair_width and pair_bits % pair_width:
        raise CorruptStreamError("pair stream is not a whole number of records")

    chunks = []
    for size in sections:
        chunks.append(data[pos:pos + size])
        pos += size
    dict_bytes, offsets, rle_stream, pair_stream = chunks
    reader = BitReader(dict_bytes, n_b * l_b)
    dictionary = tuple(reader.read(l_b) for _ in range(n_b))
    return CompressedImage(
        width=width, height=height, bpp=bpp, lossy=bool(flags & FLAG_LOSSY),
        selection=selection, dictionary=dictionary, rle_bits=rle_bits,
        pair_bits=pair_bits, offsets=offsets, rle_stream=rle_stream,
        pair_stream=pair_stream,
    )


def encode_bytes(img, psnr_thr=None):
    return serialize(encode(img, psnr_thr))


def decode_bytes(data):
    return decode(deserialize(data))

