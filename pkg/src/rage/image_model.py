"""Raw images as raster-ordered pixel chunks, plus PPM/PAM file I/O.

Chunk layout: a 24 bpp chunk holds ``R<<16 | G<<8 | B``; a 32 bpp chunk
holds ``A<<24 | R<<16 | G<<8 | B``.  Every channel is stored MSB-first, so
the significance of chunk bit ``pos`` inside its channel is ``pos % 8``.
"""

from dataclasses import dataclass
import os

import numpy as np

from .errors import (
    MalformedHeaderError,
    TruncatedDataError,
    UnsupportedDepthError,
)

MAX_DIMENSION = 2**16 - 1
SUPPORTED_BPP = (24, 32)


def bit_significance(pos):
    """Significance of chunk bit ``pos`` relative to its 8-bit channel."""
    return pos % 8


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """Decoded raster of ``width * height`` chunks of ``bpp`` bits each."""

    width: int
    height: int
    bpp: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.bpp not in SUPPORTED_BPP:
            raise ValueError(f"bpp must be 24 or 32, got {self.bpp}")
        if not (1 <= self.width <= MAX_DIMENSION and 1 <= self.height <= MAX_DIMENSION):
            raise ValueError(
                f"image dimensions {self.width}x{self.height} outside 1..{MAX_DIMENSION}")
        pixels = np.ascontiguousarray(self.pixels, dtype=np.uint32).reshape(-1)
        if pixels.size != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} pixels, got {pixels.size}")
        if self.bpp == 24 and pixels.size and int(pixels.max()) >> 24:
            raise ValueError("24 bpp chunk has bits set above position 23")
        pixels.flags.writeable = False
        object.__setattr__(self, "pixels", pixels)

    @property
    def n(self):
        return self.width * self.height

    @property
    def chunk_bits(self):
        return self.bpp

    @property
    def channels(self):
        return self.bpp // 8

    @property
    def raw_bytes(self):
        return self.n * self.channels

    def chunk_at(self, x, y):
        return chunk_at(self, x, y)

    def rows(self):
        """Pixel chunks as a ``(height, width)`` view."""
        return self.pixels.reshape(self.height, self.width)

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return (self.width == other.width and self.height == other.height
                and self.bpp == other.bpp
                and np.array_equal(self.pixels, other.pixels))

    def __repr__(self):
        return f"ImageBuffer({self.width}x{self.height}, bpp={self.bpp})"

    @classmethod
    def from_channels(cls, array):
        """Build from a ``(h, w, 3)`` RGB or ``(h, w, 4)`` RGBA uint8 array."""
        array = np.asarray(array)
        if array.ndim != 3 or array.shape[2] not in (3, 4):
            raise ValueError("expected an array of shape (h, w, 3) or (h, w, 4)")
        a = array.astype(np.uint32)
        chunks = (a[..., 0] << 16) | (a[..., 1] << 8) | a[..., 2]
        if array.shape[2] == 4:
            chunks |= a[..., 3] << 24
        h, w = array.shape[:2]
        return cls(w, h, array.shape[2] * 8, chunks.reshape(-1))

    def to_channels(self):
        """Inverse of :meth:`from_channels`: RGB or RGBA bytes per pixel."""
        p = self.rows()
        planes = [(p >> 16) & 0xFF, (p >> 8) & 0xFF, p & 0xFF]
        if self.bpp == 32:
            planes.append(p >> 24)
        return np.stack(planes, axis=-1).astype(np.uint8)


def chunk_at(img, x, y):
    """Chunk at column ``x``, row ``y`` (raster index ``y * width + x``)."""
    if not (0 <= x < img.width and 0 <= y < img.height):
        raise IndexError(f"({x}, {y}) outside {img.width}x{img.height} image")
    return int(img.pixels[y * img.width + x])


def crop(img, x, y, w, h):
    """Rectangular sub-image with top-left corner ``(x, y)``."""
    if w < 1 or h < 1 or x < 0 or y < 0 or x + w > img.width or y + h > img.height:
        raise IndexError(f"rect {(x, y, w, h)} outside {img.width}x{img.height} image")
    return ImageBuffer(w, h, img.bpp, img.rows()[y:y + h, x:x + w].copy())


# --- Netpbm parsing ---------------------------------------------------------

def _ppm_tokens(data, count, pos):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise MalformedHeaderError("PPM header ended early")
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or not data[pos:pos + 1].isspace():
        raise MalformedHeaderError("missing whitespace after PPM header")
    return tokens, pos + 1


def _parse_int(token, what):
    try:
        value = int(token)
    except ValueError:
        raise MalformedHeaderError(f"bad {what}: {token!r}") from None
    if value < 0:
        raise MalformedHeaderError(f"negative {what}")
    return value


def _parse_ppm(data):
    tokens, pos = _ppm_tokens(data, 3, 2)
    width = _parse_int(tokens[0], "width")
    height = _parse_int(tokens[1], "height")
    maxval = _parse_int(tokens[2], "maxval")
    if maxval != 255:
        raise UnsupportedDepthError(f"only 8-bit channels supported (maxval {maxval})")
    return width, height, 3, data[pos:]


def _parse_pam(data):
    fields = {}
    pos = data.find(b"\n") + 1
    while True:
        end = data.find(b"\n", pos)
        if end < 0:
            raise MalformedHeaderError("PAM header has no ENDHDR")
        line = data[pos:end].strip()
        pos = end + 1
        if line == b"ENDHDR":
            break
        if not line or line.startswith(b"#"):
            continue
        key, _, value = line.partition(b" ")
        fields[key.decode("ascii", "replace")] = value.strip()
    for key in ("WIDTH", "HEIGHT", "DEPTH", "MAXVAL"):
        if key not in fields:
            raise MalformedHeaderError(f"PAM header missing {key}")
    width = _parse_int(fields["WIDTH"], "width")
    height = _parse_int(fields["HEIGHT"], "height")
    depth = _parse_int(fields["DEPTH"], "depth")
    maxval = _parse_int(fields["MAXVAL"], "maxval")
    if maxval != 255:
        raise UnsupportedDepthError(f"only 8-bit channels supported (maxval {maxval})")
    tupltype = fields.get("TUPLTYPE", b"").decode("ascii", "replace")
    if (depth, tupltype) not in ((4, "RGB_ALPHA"), (3, "RGB")):
        raise UnsupportedDepthError(
            f"unsupported PAM layout DEPTH {depth} TUPLTYPE {tupltype or '?'}")
    return width, height, depth, data[pos:]


def decode_netpbm(data):
    """Parse PPM (P6) or PAM (P7) bytes into an :class:`ImageBuffer`."""
    magic = data[:2]
    if magic == b"P6":
        width, height, depth, raster = _parse_ppm(data)
    elif magic == b"P7":
        width, height, depth, raster = _parse_pam(data)
    else:
        raise MalformedHeaderError(f"not a P6/P7 file (magic {magic!r})")
    if width == 0 or height == 0:
        raise MalformedHeaderError("zero-area image")
    if width > MAX_DIMENSION or height > MAX_DIMENSION:
        raise MalformedHeaderError(f"dimensions exceed {MAX_DIMENSION}")
    need = width * height * depth
    if len(raster) < need:
        raise TruncatedDataError(f"expected {need} raster bytes, found {len(raster)}")
    array = np.frombuffer(raster, dtype=np.uint8, count=need).reshape(height, width, depth)
    return ImageBuffer.from_channels(array)


def encode_netpbm(img):
    """Serialize: 24 bpp as PPM P6, 32 bpp as PAM RGB_ALPHA."""
    raster = img.to_channels().tobytes()
    if img.bpp == 24:
        header = f"P6\n{img.width} {img.height}\n255\n"
    else:
        header = (f"P7\nWIDTH {img.width}\nHEIGHT {img.height}\nDEPTH 4\n"
                  "MAXVAL 255\nTUPLTYPE RGB_ALPHA\nENDHDR\n")
    return header.encode("ascii") + raster


def load_image(path):
    with open(path, "rb") as f:
        data = f.read()
    return decode_netpbm(data)


def store_image(img, path):
    data = encode_netpbm(img)
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as f:
        f.write(data)
    os.replace(tmp, path)
