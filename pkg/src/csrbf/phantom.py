"""Synthetic brain-like test image and landmark set.

The image is a 128 x 128 grayscale slice built from ellipses (scalp, skull,
cortex, white matter, two ventricles).  Seven landmarks sit on anatomical-ish
features; each target is shifted by at most 2.5 pixels per axis, which keeps
tau_{2,7/2} topology preserving for c = 20 (bound: 5.09 * 2.5 < 20) and makes
it fold for c = 2.  The shipped files in ``csrbf/data`` are exactly what
:func:`brain_phantom` and :func:`brain_landmarks` produce.
"""

from importlib import resources

import numpy as np

from .netpbm import RasterImage, decode
from .registration import LandmarkCorrespondence, parse_landmarks_csv

__all__ = [
    "PHANTOM_SIZE",
    "brain_phantom",
    "brain_landmarks",
    "shipped_phantom",
    "shipped_landmarks",
    "shipped_path",
]

PHANTOM_SIZE = 128

# (center x, center y, semi-axis x, semi-axis y, rotation [rad], intensity)
_ELLIPSES = [
    (63.5, 63.5, 58.0, 62.0, 0.0, 70),     # scalp
    (63.5, 63.5, 54.0, 58.0, 0.0, 230),    # skull
    (63.5, 63.5, 50.0, 54.0, 0.0, 110),    # grey matter
    (63.5, 65.0, 38.0, 42.0, 0.0, 165),    # white matter
    (54.0, 60.0, 6.0, 16.0, 0.35, 25),     # left ventricle
    (73.0, 60.0, 6.0, 16.0, -0.35, 25),    # right ventricle
    (63.5, 92.0, 10.0, 5.0, 0.0, 140),     # posterior structure
]

_SOURCE = [
    (40.4, 36.7),
    (87.6, 36.2),
    (24.8, 70.3),
    (63.7, 64.6),
    (103.3, 69.8),
    (44.7, 101.5),
    (84.1, 102.2),
]
_TARGET = [
    (42.6, 38.1),
    (85.9, 38.4),
    (27.1, 71.0),
    (64.4, 62.3),
    (101.0, 70.9),
    (46.2, 99.2),
    (82.6, 99.9),
]


def brain_phantom(size=PHANTOM_SIZE):
    scale = size / PHANTOM_SIZE
    yy, xx = np.mgrid[0:size, 0:size].astype(float)
    img = np.zeros((size, size))
    for cx, cy, ax, ay, rot, val in _ELLIPSES:
        dx = xx - cx * scale
        dy = yy - cy * scale
        u = dx * np.cos(rot) + dy * np.sin(rot)
        v = -dx * np.sin(rot) + dy * np.cos(rot)
        img[(u / (ax * scale)) ** 2 + (v / (ay * scale)) ** 2 <= 1.0] = val
    # low-amplitude deterministic texture so warps are visible inside tissue
    texture = 12.0 * np.sin(xx / (3.1 * scale)) * np.sin(yy / (4.3 * scale))
    img = np.where(img > 0, img + texture, img)
    return RasterImage(np.clip(np.rint(img), 0, 255).astype(np.uint8))


def brain_landmarks():
    return LandmarkCorrespondence(_SOURCE, _TARGET)


def shipped_path(name):
    """Filesystem path of a bundled data file (``brain.pgm`` or ``brain_landmarks.csv``)."""
    return resources.files("csrbf") / "data" / name


def shipped_phantom():
    return decode(shipped_path("brain.pgm").read_bytes())


def shipped_landmarks():
    return parse_landmarks_csv(shipped_path("brain_landmarks.csv").read_text())
