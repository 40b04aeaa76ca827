"""Landmark registration with CSRBF displacement interpolants.

A correspondence ``x_j -> t_j`` is turned into the map ``H(x) = x + R(x)``
where each displacement component ``R_k`` is an interpolant
``sum_j alpha_jk Phi(|x - x_j|)`` over one kernel.  The coefficients solve two
symmetric positive definite systems that share one Cholesky factor.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass
import io
import json
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.linalg import lapack
from scipy.spatial.distance import cdist, pdist

from .errors import ConditioningError, InputError, LandmarkParseError

__all__ = [
    "Region",
    "LandmarkCorrespondence",
    "Transformation",
    "JacobianField",
    "interpolation_matrix",
    "fit",
    "evaluate",
    "jacobian",
    "det_field",
    "read_landmarks",
    "parse_landmarks_csv",
    "parse_landmarks_json",
    "format_landmarks_csv",
    "format_landmarks_json",
    "format_det_field_csv",
    "parse_det_field_csv",
    "FLOAT_FMT",
]

# fixed formatting for every numeric value written to a file
FLOAT_FMT = "{:.9g}"

_ZERO_RADIUS = 1e-14
_RESIDUAL_RTOL = 1e-10
_REFINE_STEPS = 3


def _fmt(v):
    return FLOAT_FMT.format(float(v))


class Region(NamedTuple):
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def validate(self):
        vals = np.array(self, dtype=float)
        if not np.all(np.isfinite(vals)):
            raise InputError(f"region bounds must be finite: {tuple(self)}")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise InputError(f"degenerate region {tuple(self)}")
        return self


def _as_points(points, what):
    arr = np.array(points, dtype=float)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"{what} must be an (N, 2) array of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{what} contains non-finite coordinates")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LandmarkCorrespondence:
    """Paired source and target landmarks, both of shape (N, 2)."""

    source: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        src = _as_points(self.source, "source landmarks")
        tgt = _as_points(self.target, "target landmarks")
        if len(src) == 0:
            raise InputError("at least one landmark pair is required")
        if src.shape != tgt.shape:
            raise InputError(
                f"source and target differ in length ({len(src)} vs {len(tgt)})"
            )
        if len(src) > 1 and pdist(src).min() <= 0:
            raise InputError("source landmarks must be pairwise distinct")
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)

    def __len__(self):
        return len(self.source)

    @property
    def displacements(self):
        return self.target - self.source

    def reversed(self):
        """Swap roles of source and target."""
        return LandmarkCorrespondence(self.target, self.source)

    def max_shift(self):
        """Largest absolute coordinate shift over all pairs."""
        return float(np.abs(self.displacements).max())


def interpolation_matrix(kernel, points):
    points = np.asarray(points, dtype=float)
    return kernel.value(cdist(points, points))


def _cholesky_solve(A, rhs):
    factor, info = lapack.dpotrf(A, lower=1, clean=1)
    if info > 0:
        raise ConditioningError(
            f"interpolation matrix is not numerically positive definite "
            f"(Cholesky breakdown at pivot {info - 1}); landmarks are too close "
            f"relative to the support size",
            pivot=info - 1,
        )
    if info < 0:
        raise ValueError(f"dpotrf: illegal argument {-info}")

    def solve(b):
        x, inf = lapack.dpotrs(factor, b, lower=1)
        if inf != 0:
            raise ValueError(f"dpotrs: illegal argument {-inf}")
        return x

    # iterative refinement with the residual accumulated in extended precision;
    # keep the iterate whose working-precision residual is smallest
    A_ext = A.astype(np.longdouble)
    rhs_ext = rhs.astype(np.longdouble)
    x = solve(rhs)
    best, best_res = x, np.abs(A @ x - rhs).max()
    for _ in range(_REFINE_STEPS):
        x = x + solve(np.asarray(rhs_ext - A_ext @ x, dtype=float))
        res = np.abs(A @ x - rhs).max()
        if res < best_res:
            best, best_res = x, res
    return best


@dataclass(frozen=True, eq=False)
class Transformation:
    """The map ``x -> x + sum_j coefficients[j] * Phi(|x - centers[j]|)``."""

    kernel: object
    centers: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        centers = _as_points(self.centers, "centers")
        coefs = _as_points(self.coefficients, "coefficients")
        if centers.shape != coefs.shape:
            raise InputError("centers and coefficients must have the same shape")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "coefficients", coefs)

    def _terms(self, x, with_grad):
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (2,):
            raise InputError(f"points must have a trailing axis of length 2, got {x.shape}")
        disp = np.zeros(x.shape)
        grad = np.zeros(x.shape + (2,)) if with_grad else None
        # fixed summation order over centers keeps results independent of chunking
        for center, coef in zip(self.centers, self.coefficients):
            diff = x - center
            r = np.hypot(diff[..., 0], diff[..., 1])
            disp += self.kernel.value(r)[..., None] * coef
            if with_grad:
                # grad Phi = Phi'(r) (x - x_j) / r, removable at the center
                at_center = r < _ZERO_RADIUS
                w = np.where(
                    at_center, 0.0, self.kernel.deriv(r) / np.where(at_center, 1.0, r)
                )
                grad += coef[:, None] * (w[..., None] * diff)[..., None, :]
        return x, disp, grad

    def evaluate(self, x):
        x, disp, _ = self._terms(x, False)
        return x + disp

    def displacement(self, x):
        return self._terms(x, False)[1]

    def jacobian(self, x):
        """Analytic Jacobian, shape ``x.shape[:-1] + (2, 2)``; ``J[..., k, m] = dH_k/dx_m``."""
        _, _, grad = self._terms(x, True)
        grad[..., 0, 0] += 1.0
        grad[..., 1, 1] += 1.0
        return grad

    def det(self, x):
        J = self.jacobian(x)
        return J[..., 0, 0] * J[..., 1, 1] - J[..., 0, 1] * J[..., 1, 0]

    def __call__(self, x):
        return self.evaluate(x)


def fit(kernel, landmarks):
    """Interpolating transformation taking ``landmarks.source`` onto ``landmarks.target``.

    Raises :class:`ConditioningError` if the kernel matrix cannot be factored
    or the solve does not reach a relative residual of 1e-10.
    """
    src = landmarks.source
    d = landmarks.displacements
    A = interpolation_matrix(kernel, src)
    alpha = _cholesky_solve(A, d)
    scale = 1.0 + np.abs(d).max()
    residual = np.abs(A @ alpha - d).max()
    if not residual <= _RESIDUAL_RTOL * scale:
        raise ConditioningError(
            f"interpolation residual {residual:.3g} exceeds {_RESIDUAL_RTOL:g} * {scale:.3g}"
        )
    return Transformation(kernel, src, alpha)


def evaluate(t, x):
    return t.evaluate(x)


def jacobian(t, x):
    return t.jacobian(x)


@dataclass(frozen=True, eq=False)
class JacobianField:
    """Jacobian determinants sampled on a regular grid.

    ``det_values[i, j]`` is the determinant at ``(xs[i], ys[j])``.
    """

    region: Region
    resolution: tuple
    det_values: np.ndarray
    min_det: float
    argmin: tuple
    negative_fraction: float

    @property
    def xs(self):
        return np.linspace(self.region.xmin, self.region.xmax, self.resolution[0])

    @property
    def ys(self):
        return np.linspace(self.region.ymin, self.region.ymax, self.resolution[1])

    @property
    def preserves_topology(self):
        return self.min_det > 0


def _grid(region, resolution):
    xs = np.linspace(region.xmin, region.xmax, resolution[0])
    ys = np.linspace(region.ymin, region.ymax, resolution[1])
    return np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1)


def det_field(t, region, resolution, threads=0):
    """Sample ``det J`` of ``t`` on an ``nx x ny`` grid spanning ``region``.

    ``threads > 1`` splits the grid rows over a thread pool; every entry is
    computed independently, so the result does not depend on ``threads``.
    """
    region = Region(*region).validate()
    nx, ny = (int(n) for n in resolution)
    if nx < 2 or ny < 2:
        raise InputError(f"resolution must be at least 2 x 2, got {nx} x {ny}")
    pts = _grid(region, (nx, ny))
    if threads and threads > 1:
        chunks = np.array_split(np.arange(nx), min(threads, nx))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda rows: t.det(pts[rows]), chunks))
        dets = np.concatenate(parts, axis=0)
    else:
        dets = t.det(pts)
    i, j = np.unravel_index(int(np.argmin(dets)), dets.shape)
    return JacobianField(
        region=region,
        resolution=(nx, ny),
        det_values=dets,
        min_det=float(dets[i, j]),
        argmin=(float(pts[i, j, 0]), float(pts[i, j, 1])),
        negative_fraction=float(np.count_nonzero(dets < 0)) / dets.size,
    )


def format_det_field_csv(field):
    """CSV text: three ``#`` header lines, then one row per x sample."""
    lines = [
        "# region: " + ",".join(_fmt(v) for v in field.region),
        "# resolution: {},{}".format(*field.resolution),
        "# min_det: " + _fmt(field.min_det),
    ]
    lines += [",".join(_fmt(v) for v in row) for row in field.det_values]
    return "\n".join(lines) + "\n"


def parse_det_field_csv(text):
    """Inverse of :func:`format_det_field_csv` (values at 9 significant digits)."""
    lines = text.splitlines()
    if len(lines) < 3:
        raise InputError("det-field CSV needs a three-line header")
    try:
        region = Region(*(float(v) for v in lines[0].split(":", 1)[1].split(",")))
        nx, ny = (int(v) for v in lines[1].split(":", 1)[1].split(","))
        min_det = float(lines[2].split(":", 1)[1])
        values = np.array(
            [[float(v) for v in row.split(",")] for row in lines[3:] if row.strip()]
        )
    except (IndexError, ValueError) as exc:
        raise InputError(f"malformed det-field CSV: {exc}") from None
    if values.shape != (nx, ny):
        raise InputError(f"expected {nx} x {ny} values, found {values.shape}")
    xs = np.linspace(region.xmin, region.xmax, nx)
    ys = np.linspace(region.ymin, region.ymax, ny)
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    return JacobianField(
        region, (nx, ny), values, min_det, (float(xs[i]), float(ys[j])),
        float(np.count_nonzero(values < 0)) / values.size,
    )


# ---------------------------------------------------------------- landmark I/O

_CSV_HEADER = ["sx", "sy", "tx", "ty"]


def parse_landmarks_csv(text):
    """Parse ``sx,sy,tx,ty`` CSV text.  Blank lines and ``#`` comments are skipped."""
    rows = []
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([stripped]))]
        if not header_seen:
            if fields != _CSV_HEADER:
                raise LandmarkParseError(
                    f"expected header 'sx,sy,tx,ty', got {stripped!r}", lineno
                )
            header_seen = True
            continue
        if len(fields) != 4:
            raise LandmarkParseError(f"expected 4 fields, got {len(fields)}", lineno)
        try:
            vals = [float(f) for f in fields]
        except ValueError:
            raise LandmarkParseError(f"non-numeric field in {stripped!r}", lineno) from None
        if not all(np.isfinite(vals)):
            raise LandmarkParseError("non-finite coordinate", lineno)
        rows.append(vals)
    if not header_seen:
        raise LandmarkParseError("missing header 'sx,sy,tx,ty'")
    if not rows:
        raise LandmarkParseError("no landmark rows")
    arr = np.array(rows)
    return LandmarkCorrespondence(arr[:, :2], arr[:, 2:])


def parse_landmarks_json(text):
    """Parse a JSON array of ``{"source": [x, y], "target": [x, y]}`` objects."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LandmarkParseError(exc.msg, exc.lineno) from None
    if not isinstance(data, list) or not data:
        raise LandmarkParseError("expected a non-empty JSON array")
    src, tgt = [], []
    for i, item in enumerate(data):
        try:
            s = [float(v) for v in item["source"]]
            t = [float(v) for v in item["target"]]
        except (KeyError, TypeError, ValueError):
            raise LandmarkParseError(
                f"entry {i} must be {{'source': [x, y], 'target': [x, y]}}"
            ) from None
        if len(s) != 2 or len(t) != 2:
            raise LandmarkParseError(f"entry {i}: points must have two coordinates")
        src.append(s)
        tgt.append(t)
    return LandmarkCorrespondence(src, tgt)


def read_landmarks(path):
    """Load landmarks from a ``.csv`` or ``.json`` file."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return parse_landmarks_json(text)
    return parse_landmarks_csv(text)


def format_landmarks_csv(landmarks):
    buf = io.StringIO()
    buf.write(",".join(_CSV_HEADER) + "\n")
    for s, t in zip(landmarks.source, landmarks.target):
        buf.write(",".join(_fmt(v) for v in (*s, *t)) + "\n")
    return buf.getvalue()


def format_landmarks_json(landmarks):
    items = [
        {"source": [float(s[0]), float(s[1])], "target": [float(t[0]), float(t[1])]}
        for s, t in zip(landmarks.source, landmarks.target)
    ]
    return json.dumps(items, indent=1) + "\n"
