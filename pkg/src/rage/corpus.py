"""Small deterministic image corpus: discrete-tone graphics plus a few
continuous-tone images, generated on demand."""

from dataclasses import dataclass
import os

import numpy as np

from .image_model import ImageBuffer, load_image, store_image

DISCRETE = "discrete"
CONTINUOUS = "continuous"

_FONT = {
    "R": ["1110", "1001", "1001", "1110", "1010", "1001", "1001"],
    "A": ["0110", "1001", "1001", "1111", "1001", "1001", "1001"],
    "G": ["0111", "1000", "1000", "1011", "1001", "1001", "0111"],
    "E": ["1111", "1000", "1000", "1110", "1000", "1000", "1111"],
    "O": ["0110", "1001", "1001", "1001", "1001", "1001", "0110"],
    "K": ["1001", "1010", "1100", "1100", "1010", "1001", "1001"],
    "1": ["0010", "0110", "0010", "0010", "0010", "0010", "0111"],
    "2": ["0110", "1001", "0001", "0010", "0100", "1000", "1111"],
    "3": ["1110", "0001", "0001", "0110", "0001", "0001", "1110"],
    " ": ["0000"] * 7,
}


@dataclass(frozen=True)
class CorpusImage:
    name: str
    tone: str
    image: ImageBuffer


def _canvas(h, w, color, alpha=None):
    channels = 3 if alpha is None else 4
    img = np.zeros((h, w, channels), dtype=np.uint8)
    img[..., :3] = color
    if alpha is not None:
        img[..., 3] = alpha
    return img


def _text(img, text, x, y, color, scale=1):
    for ch in text:
        glyph = np.array([[c == "1" for c in row] for row in _FONT[ch]])
        glyph = np.kron(glyph, np.ones((scale, scale), dtype=bool))
        gh, gw = glyph.shape
        region = img[y:y + gh, x:x + gw]
        mask = glyph[:region.shape[0], :region.shape[1]]
        region[mask, :3] = color
        if img.shape[2] == 4:
            region[mask, 3] = 255
        x += gw + scale


def _disc(h, w, cy, cx, r):
    yy, xx = np.mgrid[:h, :w]
    return (yy - cy) ** 2 + (xx - cx) ** 2 <= r * r


def _generate(rng):
    out = []

    img = _canvas(16, 16, (240, 240, 240))
    img[:8, :8] = (200, 30, 30)
    img[8:, 8:] = (30, 30, 200)
    img[:8, 8:] = (30, 160, 30)
    out.append(("quadrants_16", DISCRETE, img))

    img = _canvas(9, 40, (255, 255, 255))
    _text(img, "RAGE 12", 1, 1, (0, 0, 0))
    out.append(("glyphs_40x9", DISCRETE, img))

    img = _canvas(32, 32, (255, 255, 255))
    img[_disc(32, 32, 16, 12, 9)] = (230, 120, 0)
    img[18:28, 16:30] = (0, 70, 140)
    img[_disc(32, 32, 22, 23, 3)] = (255, 255, 255)
    out.append(("logo_32", DISCRETE, img))

    img = _canvas(16, 16, (0, 0, 0), alpha=0)
    mask = _disc(16, 16, 7.5, 7.5, 6.5)
    img[mask] = (20, 120, 220, 255)
    ring = mask & ~_disc(16, 16, 7.5, 7.5, 5.5)
    img[ring] = (10, 60, 110, 160)
    out.append(("icon_alpha_16", DISCRETE, img))

    img = _canvas(32, 32, (0, 0, 0), alpha=0)
    img[4:28, 4:28] = (250, 200, 40, 255)
    img[3, 5:27, 3] = 96
    img[28, 5:27, 3] = 96
    img[5:27, 3, 3] = 96
    img[5:27, 28, 3] = 96
    img[3, 5:27, :3] = img[28, 5:27, :3] = (250, 200, 40)
    img[5:27, 3, :3] = img[5:27, 28, :3] = (250, 200, 40)
    _text(img, "OK", 8, 12, (60, 40, 0), scale=1)
    out.append(("badge_alpha_32", DISCRETE, img))

    palette = np.array([(255, 0, 0), (255, 128, 0), (255, 255, 0), (0, 200, 0),
                        (0, 0, 255), (128, 0, 200)], dtype=np.uint8)
    img = np.repeat(palette, 2, axis=0)[:, None, :].repeat(24, axis=1)
    out.append(("stripes_24x12", DISCRETE, img.copy()))

    yy, xx = np.mgrid[:16, :16]
    img = _canvas(16, 16, (20, 20, 20))
    img[((yy // 2) + (xx // 2)) % 2 == 1] = (235, 235, 235)
    out.append(("checker_16", DISCRETE, img))

    img = _canvas(20, 48, (250, 250, 250))
    img[2:18, 2:46] = (40, 100, 200)
    img[2, 2:46] = img[17, 2:46] = (20, 50, 100)
    img[2:18, 2] = img[2:18, 45] = (20, 50, 100)
    _text(img, "OK 123", 7, 6, (255, 255, 255))
    out.append(("button_48x20", DISCRETE, img))

    pal = rng.integers(0, 256, size=(8, 3), dtype=np.uint8)
    tiles = rng.integers(0, 8, size=(8, 8))
    img = pal[np.kron(tiles, np.ones((4, 4), dtype=int))]
    out.append(("palette_tiles_32", DISCRETE, img.astype(np.uint8)))

    sprite_pal = np.array([(0, 0, 0, 0), (40, 40, 40, 255), (200, 60, 60, 255),
                           (250, 220, 180, 255), (60, 60, 200, 255)], dtype=np.uint8)
    half = rng.choice(5, size=(16, 8), p=[0.4, 0.15, 0.2, 0.15, 0.1])
    sprite = np.concatenate([half, half[:, ::-1]], axis=1)
    out.append(("sprite_alpha_16", DISCRETE, sprite_pal[sprite]))

    img = _canvas(40, 64, (236, 236, 240))
    img[:10] = (50, 60, 80)
    _text(img, "RAGE", 2, 1, (255, 255, 255))
    for row in (14, 22, 30):
        img[row + 6, 2:62] = (200, 200, 210)
        _text(img, "KO 32", 4, row - 1, (30, 30, 30))
        img[row:row + 4, 50:58] = (40, 160, 90)
    out.append(("ui_panel_64x40", DISCRETE, img))

    img = _canvas(24, 64, (255, 255, 250))
    _text(img, "GRAEOK123", 1, 1, (20, 20, 20))
    _text(img, "KOEGAR321", 1, 9, (120, 0, 0))
    _text(img, "AGE1 2 3R", 1, 16, (0, 0, 140))
    out.append(("font_sheet_64x24", DISCRETE, img))

    out.append(("solid_10", DISCRETE, _canvas(10, 10, (12, 34, 56))))
    out.append(("pixel_1x1", DISCRETE, _canvas(1, 1, (1, 2, 3), alpha=4)))

    yy, xx = np.mgrid[:32, :32]
    img = np.stack([xx * 8, yy * 8, (xx + yy) * 4], axis=-1).astype(np.uint8)
    out.append(("gradient_32", CONTINUOUS, img))

    img = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
    out.append(("noise_16", CONTINUOUS, img))

    base = np.stack([xx * 5 + 40, 120 + 60 * np.sin(yy / 5.0), 200 - yy * 3], axis=-1)
    noisy = base + rng.normal(0, 6, size=base.shape)
    out.append(("photo_like_32", CONTINUOUS, np.clip(noisy, 0, 255).astype(np.uint8)))
    return out


def bundled_corpus(seed=2024):
    rng = np.random.default_rng(seed)
    return [CorpusImage(name, tone, ImageBuffer.from_channels(array))
            for name, tone, array in _generate(rng)]


def corpus_filename(item):
    return item.name + (".pam" if item.image.bpp == 32 else ".ppm")


def write_corpus(directory, seed=2024):
    os.makedirs(directory, exist_ok=True)
    paths = []
    for item in bundled_corpus(seed):
        path = os.path.join(directory, corpus_filename(item))
        store_image(item.image, path)
        paths.append(path)
    return paths


def load_corpus(directory):
    """Load every ``.ppm``/``.pam`` file in ``directory``, sorted by name."""
    names = sorted(f for f in os.listdir(directory)
                   if f.lower().endswith((".ppm", ".pam")))
    return [(os.path.splitext(f)[0], load_image(os.path.join(directory, f)))
            for f in names]
