"""Constructors for every matrix family in the toolkit.

Given a function specification and a grid of distinct sample points, build
the divided-difference (Loewner) matrix, the divided-sum (anti-Loewner)
matrix, the sign-perturbed family Z_N interpolating between them, the
epsilon-shifted 2x2 block pair used by the block-equivalence harness, and
the rank-two Gram matrix t + x_i x_j. All constructors are pure and write
both triangles of the output from one formula evaluation per pair.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from antiloewner import _kernels
from antiloewner.errors import ConstructionError, InputError
from antiloewner.functions import FunctionSpec, Interval, derivative, evaluate
from antiloewner.linalg import SymMatrix

# Grids with a smaller relative gap than this are rejected outright: the
# points are required to be distinct, and near-coincidence only manufactures
# conditioning failures in the divided differences.
MIN_GAP_REL = 1e-10


@dataclass(frozen=True)
class Grid:
    """Ordered, pairwise distinct sample points strictly inside an interval."""

    points: tuple[float, ...]
    interval: Interval

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 1:
            raise InputError("grid needs at least one point")
        for p in pts:
            if not math.isfinite(p):
                raise InputError(f"grid point {p!r} is not finite")
            if not self.interval.contains(p):
                raise InputError(
                    f"grid point {p!r} is not strictly inside "
                    f"({self.interval.a}, {self.interval.b})"
                )
        scale = max(1.0, max(abs(p) for p in pts))
        ordered = sorted(pts)
        for a, b in zip(ordered, ordered[1:]):
            if b - a < MIN_GAP_REL * scale:
                raise InputError(
                    f"grid points {a!r} and {b!r} are closer than "
                    f"{MIN_GAP_REL:g} * scale; points must be distinct"
                )

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def min_gap(self) -> float:
        if len(self.points) == 1:
            return math.inf
        ordered = sorted(self.points)
        return min(b - a for a, b in zip(ordered, ordered[1:]))

    def squared(self) -> "Grid":
        return Grid(tuple(p * p for p in self.points), self.interval.squared())

    def to_json(self) -> dict:
        return {"points": list(self.points), "interval": self.interval.to_json()}

    @classmethod
    def from_json(cls, obj) -> "Grid":
        if not isinstance(obj, dict) or "points" not in obj:
            raise InputError('grid document must be an object with a "points" field')
        interval = Interval.from_json(obj["interval"]) if "interval" in obj \
            else Interval(0.0, math.inf)
        return cls(tuple(obj["points"]), interval)


def load_grid(path) -> Grid:
    """Load a grid from JSON ({"points": [...], "interval": [a, b]}) or CSV
    (one point per line, implying the interval (0, inf))."""
    p = Path(path)
    text = p.read_text()
    if p.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        return Grid.from_json(json.loads(text))
    points = []
    for row in csv.reader(io.StringIO(text)):
        points.extend(float(cell) for cell in row if cell.strip())
    return Grid(tuple(points), Interval(0.0, math.inf))


@dataclass(frozen=True)
class SignVector:
    """Vector of +1/-1 entries matching a grid."""

    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        object.__setattr__(self, "signs", signs)
        if not signs:
            raise InputError("sign vector must be non-empty")
        for s in signs:
            if s not in (1, -1):
                raise InputError(f"signs must be exactly +1 or -1, got {s}")

    def __len__(self):
        return len(self.signs)

    @classmethod
    def all_plus(cls, n: int) -> "SignVector":
        return cls((1,) * n)

    def flipped(self) -> "SignVector":
        return SignVector(tuple(-s for s in self.signs))


@dataclass(frozen=True)
class Theorem2Config:
    """Shift size for the block pair; must leave the 2n extended points
    distinct (epsilon < min_gap/2) and inside the domain."""

    epsilon: float

    def __post_init__(self):
        eps = float(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not math.isfinite(eps) or eps <= 0.0:
            raise InputError(f"epsilon must be positive and finite, got {eps}")


def _grid_values(f: FunctionSpec, grid: Grid) -> np.ndarray:
    return np.array([evaluate(f, p) for p in grid.points], dtype=np.float64)


def _grid_derivatives(f: FunctionSpec, grid: Grid) -> np.ndarray:
    try:
        return np.array([derivative(f, p) for p in grid.points], dtype=np.float64)
    except NotImplementedError:
        raise ConstructionError(
            f"{f.kind} has no derivative; the divided-difference diagonal needs one"
        ) from None


def loewner(f: FunctionSpec, grid: Grid) -> SymMatrix:
    """Matrix of divided differences (f(x_i)-f(x_j))/(x_i-x_j) with the
    derivative f'(x_i) on the diagonal."""
    x = np.array(grid.points, dtype=np.float64)
    fx = _grid_values(f, grid)
    dfx = _grid_derivatives(f, grid)
    return SymMatrix(_kernels.fill_loewner(x, fx, dfx))


def anti_loewner(g: FunctionSpec, grid: Grid) -> SymMatrix:
    """Matrix of divided sums (g(x_i)+g(x_j))/(x_i+x_j); the diagonal is
    g(x_i)/x_i."""
    _require_positive_points(grid)
    x = np.array(grid.points, dtype=np.float64)
    gx = _grid_values(g, grid)
    return SymMatrix(_kernels.fill_anti_loewner(x, gx))


def signed_matrix(g: FunctionSpec, grid: Grid, s: SignVector) -> SymMatrix:
    """Sign-perturbed family Z_N = ((s_i g_i + s_j g_j)/(s_i x_i + s_j x_j));
    all signs +1 reproduces the divided-sum matrix exactly."""
    _require_positive_points(grid)
    if len(s) != grid.size:
        raise InputError(f"sign vector length {len(s)} does not match grid size {grid.size}")
    gx = _grid_values(g, grid)
    return signed_matrix_from_values(grid.points, gx, s)


def signed_matrix_from_values(x, gvals, s: SignVector) -> SymMatrix:
    """Z_N from raw value vectors; the points must be positive and distinct
    so that every denominator s_i x_i + s_j x_j is nonzero."""
    xa = np.asarray(x, dtype=np.float64)
    ga = np.asarray(gvals, dtype=np.float64)
    if xa.shape != ga.shape or xa.ndim != 1:
        raise InputError("x and g must be one-dimensional and of equal length")
    if len(s) != xa.shape[0]:
        raise InputError(f"sign vector length {len(s)} does not match {xa.shape[0]} points")
    if np.any(xa <= 0.0) or not np.all(np.isfinite(xa)):
        raise InputError("points must be positive and finite")
    if not np.all(np.isfinite(ga)):
        raise InputError("g values must be finite")
    sa = np.array(s.signs, dtype=np.float64)
    return SymMatrix(_kernels.fill_signed(xa, ga, sa))


def gram_rank2(grid: Grid, t: float) -> SymMatrix:
    """Gram matrix (t + x_i x_j): PSD of rank at most 2."""
    _require_positive_points(grid)
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise InputError(f"t must be finite and >= 0, got {t}")
    x = np.array(grid.points, dtype=np.float64)
    return SymMatrix(_kernels.fill_gram(x, t))


def default_epsilon(grid: Grid) -> float:
    """Default shift for the block pair: min(min_gap/4, headroom/2)."""
    b = grid.interval.b
    headroom = math.inf if math.isinf(b) else (b - max(grid.points))
    return min(grid.min_gap / 4.0, headroom / 2.0)


def extended_grid(grid: Grid, cfg: Theorem2Config) -> Grid:
    """The 2n-point grid (y_1..y_n, y_1+eps..y_n+eps), validated."""
    eps = cfg.epsilon
    n = grid.size
    if n >= 2:
        pts = sorted(grid.points)
        gap_pair = min(zip(pts, pts[1:]), key=lambda ab: ab[1] - ab[0])
        gap = gap_pair[1] - gap_pair[0]
        if eps >= gap / 2.0:
            raise InputError(
                f"epsilon {eps!r} must be smaller than half the minimal grid gap "
                f"{gap!r} (points {gap_pair[0]!r} and {gap_pair[1]!r})"
            )
    top = max(grid.points) + eps
    if not grid.interval.contains(top):
        raise InputError(
            f"shifted point {top!r} leaves the interval "
            f"({grid.interval.a}, {grid.interval.b}); epsilon {eps!r} is too large"
        )
    shifted = tuple(p + eps for p in grid.points)
    return Grid(grid.points + shifted, grid.interval)


def theorem2_blocks(g: FunctionSpec, grid: Grid,
                    cfg: Theorem2Config) -> tuple[SymMatrix, SymMatrix]:
    """Block pair on the extended grid (y, y+eps).

    K' is the divided-sum matrix of the 2n extended points (all signs +1);
    K'' takes signs +1 on the first n points and -1 on the shifted copies,
    which replaces the off-diagonal blocks by divided differences.
    """
    ext = extended_grid(grid, cfg)
    k_prime = anti_loewner(g, ext)
    s = SignVector((1,) * grid.size + (-1,) * grid.size)
    gx = _grid_values(g, ext)
    k_dprime = signed_matrix_from_values(ext.points, gx, s)
    return k_prime, k_dprime


def _require_positive_points(grid: Grid) -> None:
    if any(p <= 0.0 for p in grid.points):
        raise ConstructionError("divided-sum constructions need strictly positive points")
