import numpy as np
from hypothesis import given, settings
import hypothesis.strategies as st
import pytest

from rage.errors import (ImageFormatError, MalformedHeaderError, TruncatedDataError,
                         UnsupportedDepthError)
from rage.image_model import (ImageBuffer, bit_significance, chunk_at, crop,
                              decode_netpbm, encode_netpbm, load_image, store_image)


def test_ppm_layout(tmp_path):
    path = tmp_path / "two.ppm"
    path.write_bytes(b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 0, 255]))
    img = load_image(path)
    assert (img.width, img.height, img.bpp) == (2, 1, 24)
    assert img.pixels.tolist() == [0xFF0000, 0x0000FF]


def test_pam_alpha_layout():
    data = (b"P7\nWIDTH 1\nHEIGHT 1\nDEPTH 4\nMAXVAL 255\nTUPLTYPE RGB_ALPHA\nENDHDR\n"
            + bytes([1, 2, 3, 4]))
    img = decode_netpbm(data)
    assert img.bpp == 32
    assert img.pixels.tolist() == [0x04010203]


def test_ppm_comments_and_whitespace():
    img = decode_netpbm(b"P6 # a comment\n 1\t1 # more\n255\n" + bytes([9, 8, 7]))
    assert img.pixels.tolist() == [0x090807]


def test_truncated_raster():
    with pytest.raises(TruncatedDataError):
        decode_netpbm(b"P6\n2 2\n255\n" + bytes(9))


@pytest.mark.parametrize("data,error", [
    (b"", MalformedHeaderError),
    (b"P3\n1 1\n255\n0 0 0", ImageFormatError),
    (b"P6\n0 4\n255\n", MalformedHeaderError),
    (b"P6\n1 1\n65535\n" + bytes(6), UnsupportedDepthError),
    (b"P7\nWIDTH 1\nHEIGHT 1\nDEPTH 2\nMAXVAL 255\nENDHDR\n" + bytes(2), ImageFormatError),
])
def test_rejected_inputs(data, error):
    with pytest.raises(error):
        decode_netpbm(data)


def test_zero_area_rejected():
    with pytest.raises(ValueError):
        ImageBuffer(0, 3, 24, np.zeros(0, dtype=np.uint32))


def test_format_follows_depth(tmp_path):
    rgb = ImageBuffer(1, 1, 24, [0x010203])
    rgba = ImageBuffer(1, 1, 32, [0x04010203])
    assert encode_netpbm(rgb).startswith(b"P6")
    assert encode_netpbm(rgba).startswith(b"P7")
    store_image(rgba, tmp_path / "a.pam")
    assert load_image(tmp_path / "a.pam") == rgba


def test_chunk_at():
    img = ImageBuffer(4, 3, 24, np.arange(12))
    assert chunk_at(img, 0, 0) == 0
    assert chunk_at(img, 1, 2) == 9
    with pytest.raises(IndexError):
        chunk_at(img, 4, 0)


def test_crop():
    img = ImageBuffer(4, 3, 24, np.arange(12))
    assert crop(img, 1, 1, 2, 2).pixels.tolist() == [5, 6, 9, 10]
    with pytest.raises(IndexError):
        crop(img, 3, 0, 2, 1)


def test_bit_significance():
    assert [bit_significance(p) for p in (0, 7, 8, 23, 31)] == [0, 7, 0, 7, 7]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.sampled_from([24, 32]), st.data())
def test_netpbm_roundtrip(w, h, bpp, data):
    pixels = data.draw(st.lists(st.integers(0, (1 << bpp) - 1), min_size=w * h,
                                max_size=w * h))
    img = ImageBuffer(w, h, bpp, np.array(pixels, dtype=np.uint64))
    assert decode_netpbm(encode_netpbm(img)) == img
    assert ImageBuffer.from_channels(img.to_channels()) == img
