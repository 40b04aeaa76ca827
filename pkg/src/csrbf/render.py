"""Deformed-grid figures (SVG) and backward-mapped image warping."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .netpbm import RasterImage
from .registration import LandmarkCorrespondence, Region, fit

__all__ = [
    "GridSpec",
    "FigureDoc",
    "deform_grid",
    "folded_cells",
    "bilinear_sample",
    "backward_transformation",
    "warp_image",
    "SVG_SIZE",
]

SVG_SIZE = 600


@dataclass(frozen=True)
class GridSpec:
    region: Region = Region(0.0, 1.0, 0.0, 1.0)
    n_lines: int = 21
    samples: int = 201

    def __post_init__(self):
        object.__setattr__(self, "region", Region(*self.region).validate())
        if self.n_lines < 2 or self.samples < 2:
            raise InputError("a grid needs at least 2 lines and 2 samples per line")


@dataclass(eq=False)
class FigureDoc:
    """Vector figure: grid polylines plus source (circle) and target (star) markers."""

    region: Region
    polylines: list = field(default_factory=list)
    sources: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    targets: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    title: str = ""
    flip_y: bool = True

    def _to_view(self, pts):
        r = self.region
        pts = np.asarray(pts, dtype=float)
        u = SVG_SIZE * (pts[..., 0] - r.xmin) / (r.xmax - r.xmin)
        if self.flip_y:
            v = SVG_SIZE * (r.ymax - pts[..., 1]) / (r.ymax - r.ymin)
        else:
            v = SVG_SIZE * (pts[..., 1] - r.ymin) / (r.ymax - r.ymin)
        return u, v

    def to_svg(self):
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        ]
        if self.title:
            out.append(f"<title>{_escape(self.title)}</title>")
        out.append('<g class="grid" fill="none" stroke="#000000" stroke-width="0.8">')
        for line in self.polylines:
            u, v = self._to_view(line)
            pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(u, v))
            out.append(f'<polyline points="{pts}"/>')
        out.append("</g>")
        out.append('<g class="source-landmarks" fill="none" stroke="#d62728" stroke-width="2">')
        for a, b in zip(*self._to_view(self.sources)):
            out.append(f'<circle cx="{a:.3f}" cy="{b:.3f}" r="6"/>')
        out.append("</g>")
        out.append('<g class="target-landmarks" fill="none" stroke="#2ca02c" stroke-width="2">')
        for a, b in zip(*self._to_view(self.targets)):
            out.append(f'<path d="{_asterisk(a, b, 7.0)}"/>')
        out.append("</g>")
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _escape(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _asterisk(x, y, size):
    parts = []
    for k in range(3):
        ang = np.pi / 2 + k * np.pi / 3
        dx, dy = size * np.cos(ang), size * np.sin(ang)
        parts.append(f"M{x - dx:.3f},{y - dy:.3f}L{x + dx:.3f},{y + dy:.3f}")
    return "".join(parts)


def _grid_lines(g):
    r = g.region
    levels_y = np.linspace(r.ymin, r.ymax, g.n_lines)
    levels_x = np.linspace(r.xmin, r.xmax, g.n_lines)
    ts_x = np.linspace(r.xmin, r.xmax, g.samples)
    ts_y = np.linspace(r.ymin, r.ymax, g.samples)
    lines = [np.column_stack([ts_x, np.full_like(ts_x, y)]) for y in levels_y]
    lines += [np.column_stack([np.full_like(ts_y, x), ts_y]) for x in levels_x]
    return lines


def deform_grid(t, g, landmarks=None, title="", flip_y=True):
    """Map every line of grid ``g`` through ``t``.

    Horizontal lines come first (bottom to top), then vertical lines (left to
    right).  Markers default to the transformation's centers and their images.
    """
    polylines = [t.evaluate(line) for line in _grid_lines(g)]
    if landmarks is None:
        sources = t.centers
        targets = t.evaluate(t.centers)
    else:
        sources, targets = landmarks.source, landmarks.target
    return FigureDoc(g.region, polylines, np.asarray(sources), np.asarray(targets), title, flip_y)


def folded_cells(t, region, n):
    """Number of cells of an ``n x n`` node grid whose image has non-positive signed area."""
    region = Region(*region).validate()
    xs = np.linspace(region.xmin, region.xmax, n)
    ys = np.linspace(region.ymin, region.ymax, n)
    nodes = t.evaluate(np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1))
    p00, p10 = nodes[:-1, :-1], nodes[1:, :-1]
    p11, p01 = nodes[1:, 1:], nodes[:-1, 1:]
    quad = [p00, p10, p11, p01]
    area = np.zeros(p00.shape[:-1])
    for a, b in zip(quad, quad[1:] + quad[:1]):
        area += a[..., 0] * b[..., 1] - b[..., 0] * a[..., 1]
    return int(np.count_nonzero(area <= 0))


def bilinear_sample(pixels, coords, fill=0):
    """Sample ``pixels`` at fractional ``(x, y)`` coordinates.

    Pixel ``(row i, col j)`` sits at ``(x=j, y=i)``.  Coordinates outside
    ``[0, w-1] x [0, h-1]`` yield ``fill``.  Returns float values.
    """
    px = np.asarray(pixels, dtype=float)
    h, w = px.shape[:2]
    x = coords[..., 0]
    y = coords[..., 1]
    inside = (x >= 0) & (x <= w - 1) & (y >= 0) & (y <= h - 1)
    xc = np.where(inside, x, 0.0)
    yc = np.where(inside, y, 0.0)
    x0 = np.floor(xc).astype(int)
    y0 = np.floor(yc).astype(int)
    fx = xc - x0
    fy = yc - y0
    # at the last row/column the weight of the neighbour is zero
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    if px.ndim == 3:
        fx = fx[..., None]
        fy = fy[..., None]
        inside_b = inside[..., None]
    else:
        inside_b = inside
    top = px[y0, x0] * (1.0 - fx) + px[y0, x1] * fx
    bottom = px[y1, x0] * (1.0 - fx) + px[y1, x1] * fx
    val = top * (1.0 - fy) + bottom * fy
    return np.where(inside_b, val, float(fill))


def _check_inside(points, img, what):
    pts = np.asarray(points)
    ok = (
        (pts[:, 0] >= 0) & (pts[:, 0] <= img.width - 1)
        & (pts[:, 1] >= 0) & (pts[:, 1] <= img.height - 1)
    )
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        raise InputError(
            f"{what} landmark {bad} at {tuple(pts[bad])} lies outside the "
            f"{img.width} x {img.height} image"
        )


def backward_transformation(kernel, landmarks):
    """Map from output (target) coordinates back to input (source) coordinates."""
    return fit(kernel, landmarks.reversed())


def warp_image(kernel, landmarks, img, fill=0, threads=0):
    """Deform ``img`` so that source landmarks land on their targets.

    Each output pixel center is pulled back through the reverse fit and the
    input is sampled bilinearly; samples falling outside the input get
    ``fill``.  Rows are independent, so ``threads`` does not change the result.
    """
    if not isinstance(landmarks, LandmarkCorrespondence):
        raise InputError("landmarks must be a LandmarkCorrespondence")
    _check_inside(landmarks.source, img, "source")
    _check_inside(landmarks.target, img, "target")
    back = backward_transformation(kernel, landmarks)
    cols = np.arange(img.width, dtype=float)

    def warp_rows(rows):
        grid = np.stack(np.meshgrid(cols, rows.astype(float)), axis=-1)
        vals = bilinear_sample(img.pixels, back.evaluate(grid), fill)
        return np.clip(np.rint(vals), 0, 255).astype(np.uint8)

    rows = np.arange(img.height)
    if threads and threads > 1:
        chunks = np.array_split(rows, min(threads, img.height))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = np.concatenate(list(pool.map(warp_rows, chunks)), axis=0)
    else:
        out = warp_rows(rows)
    return RasterImage(out)
