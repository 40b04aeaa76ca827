"""Binary PGM (P5) and PPM (P6) reading and writing, 8-bit only."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError

__all__ = ["RasterImage", "decode", "encode", "read_image", "write_image"]


@dataclass(frozen=True, eq=False)
class RasterImage:
    """8-bit image, ``pixels`` has shape (height, width) or (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8:
            raise InputError(f"pixels must be uint8, got {px.dtype}")
        if not (px.ndim == 2 or (px.ndim == 3 and px.shape[2] == 3)):
            raise InputError(f"pixels must be (h, w) or (h, w, 3), got {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise InputError("image must be at least 1 x 1")
        object.__setattr__(self, "pixels", px)

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def is_rgb(self):
        return self.pixels.ndim == 3

    def __eq__(self, other):
        if not isinstance(other, RasterImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(
            self.pixels, other.pixels
        )


def _header_tokens(data, count):
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise InputError("truncated netpbm header")
        if data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or not data[pos : pos + 1].isspace():
        raise InputError("missing whitespace after netpbm header")
    return tokens, pos + 1


def decode(data):
    tokens, offset = _header_tokens(data, 4)
    magic = tokens[0]
    if magic not in (b"P5", b"P6"):
        raise InputError(f"unsupported netpbm type {magic!r} (only P5/P6)")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise InputError("non-integer netpbm header field") from None
    if width < 1 or height < 1:
        raise InputError(f"invalid image size {width} x {height}")
    if not 0 < maxval <= 255:
        raise InputError(f"only 8-bit images are supported (maxval={maxval})")
    channels = 3 if magic == b"P6" else 1
    size = width * height * channels
    raster = data[offset : offset + size]
    if len(raster) != size:
        raise InputError(f"truncated raster: expected {size} bytes, got {len(raster)}")
    px = np.frombuffer(raster, dtype=np.uint8).reshape(
        (height, width, 3) if channels == 3 else (height, width)
    )
    return RasterImage(px.copy())


def encode(img):
    magic = b"P6" if img.is_rgb else b"P5"
    header = magic + f"\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(img.pixels).tobytes()


def read_image(path):
    return decode(Path(path).read_bytes())


def write_image(img, path):
    Path(path).write_bytes(encode(img))
