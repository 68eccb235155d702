"""MSB-first bit writer and bounded bit reader."""

from .errors import TruncatedStreamError


class BitWriter:
    """Append fixed-width unsigned fields, most significant bit first."""

    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._nacc = 0
        self.bit_length = 0

    def write(self, value, nbits):
        if nbits == 0:
            return
        if value < 0 or value >> nbits:
            raise ValueError(f"value {value} does not fit in {nbits} bits")
        self._acc = (self._acc << nbits) | value
        self._nacc += nbits
        self.bit_length += nbits
        while self._nacc >= 8:
            self._nacc -= 8
            self._buf.append((self._acc >> self._nacc) & 0xFF)
        self._acc &= (1 << self._nacc) - 1

    def getvalue(self):
        """Return the written bits as bytes, zero-padded to a byte boundary."""
        out = bytearray(self._buf)
        if self._nacc:
            out.append((self._acc << (8 - self._nacc)) & 0xFF)
        return bytes(out)


def read_bits(data, pos, nbits, limit):
    """Read ``nbits`` starting at bit ``pos`` of ``data``.

    ``limit`` is the number of valid bits in ``data``; reads past it raise
    :class:`TruncatedStreamError`.
    """
    if nbits == 0:
        return 0
    end = pos + nbits
    if pos < 0 or end > limit:
        raise TruncatedStreamError(
            f"read of {nbits} bits at {pos} exceeds stream of {limit} bits")
    first = pos >> 3
    last = (end + 7) >> 3
    word = int.from_bytes(data[first:last], "big")
    return (word >> ((last << 3) - end)) & ((1 << nbits) - 1)


class BitReader:
    """Sequential reader over ``limit`` bits of ``data``."""

    def __init__(self, data, limit=None, pos=0):
        self.data = data
        self.limit = len(data) * 8 if limit is None else limit
        if self.limit > len(data) * 8:
            raise TruncatedStreamError("bit limit exceeds buffer length")
        self.pos = pos

    @property
    def remaining(self):
        return self.limit - self.pos

    def read(self, nbits):
        value = read_bits(self.data, self.pos, nbits, self.limit)
        self.pos += nbits
        return value
