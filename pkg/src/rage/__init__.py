"""Generalized-deduplication image compression with pixel-level random access."""

from .container import (CompressedImage, decode, decode_bytes, deserialize, encode,
                        encode_bytes, serialize)
from .configurator import RageConfig, select_base_bits
from .corpus import bundled_corpus, load_corpus, write_corpus
from .errors import (ImageFormatError, RageError, RageFormatError,
                     TruncatedStreamError, CorruptStreamError)
from .gd_transform import BitSelection
from .image_model import ImageBuffer, crop, load_image, store_image
from .random_access import AccessStats, QueryRect, measure_access, query

__version__ = "0.1.0"

__all__ = [
    "AccessStats", "BitSelection", "CompressedImage", "CorruptStreamError",
    "ImageBuffer", "ImageFormatError", "QueryRect", "RageConfig", "RageError",
    "RageFormatError", "TruncatedStreamError", "bundled_corpus", "crop", "decode",
    "decode_bytes", "deserialize", "encode", "encode_bytes", "load_corpus",
    "load_image", "measure_access", "query", "select_base_bits", "serialize",
    "store_image", "write_corpus",
]
