"""Randomized verification suites and positivity-order classification.

Every suite draws its randomness from (seed, stream, instance index), so a
given seed reproduces the exact same report regardless of how trials are
scheduled. Classification is one-sided by design: REFUTED carries a
re-checkable witness, while NO_COUNTEREXAMPLE_FOUND is a statistical
statement, never a proof. Instances whose decisive eigenvalue or
determinant falls inside the tolerance band are excluded from pass/fail
decisions and counted separately as marginal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from antiloewner.errors import InputError, NumericalError
from antiloewner.functions import (
    AlRep,
    Constant,
    FunctionSpec,
    Identity,
    Interval,
    Log1p,
    OmRep,
    Power,
    Reciprocal,
    TIMES_SQRT,
    OVER_SQRT,
    WeightedSum,
    al_rep,
    evaluate,
    om_rep,
    sqrt_transform,
)
from antiloewner.builders import (
    Grid,
    SignVector,
    Theorem2Config,
    anti_loewner,
    default_epsilon,
    loewner,
    signed_matrix_from_values,
    theorem2_blocks,
)
from antiloewner.linalg import (
    DEFAULT_DET_TOLERANCE,
    DetSignClass,
    PsdStatus,
    SymMatrix,
    congruence,
    decisive_psd_verdict,
    det_sign,
    determinant,
    eigenvalues,
)
from antiloewner.lyapunov import matrix_function

REFUTED = "REFUTED"
NO_COUNTEREXAMPLE_FOUND = "NO_COUNTEREXAMPLE_FOUND"

ANTI_LOEWNER = "anti_loewner"
MATRIX_MONOTONE = "matrix_monotone"
MATRIX_MONOTONE_DECREASING = "matrix_monotone_decreasing"

INCREASING = "increasing"
DECREASING = "decreasing"

# Stream tags separating the per-suite random substreams of one seed.
_S_CLASSIFY = 1
_S_PROP1 = 2
_S_THM2 = 3
_S_CONTINUITY = 4
_S_PROBE = 5
_S_RANDOM_FN = 6
_S_FACTOR = 7
_S_THM1 = 8

# Relative margin keeping sampled points away from the interval endpoints.
_ENDPOINT_MARGIN = 1e-6
# Enumerating all sign vectors is capped at 2^12; beyond that the suite
# samples this many random vectors plus all single flips of all-plus.
SAMPLED_SIGN_VECTORS = 2048
_POSITIVITY_MESH = 257


@dataclass(frozen=True)
class TrialConfig:
    trials: int = 200
    max_order: int = 12
    seed: int = 0
    tolerance: float = 1e-9
    interval: Interval = Interval(0.0, 10.0)

    def __post_init__(self):
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if not 2 <= self.max_order <= 12:
            raise InputError("max_order must lie in [2, 12]")
        if self.seed < 0:
            raise InputError("seed must be a nonnegative integer")
        if self.tolerance <= 0.0:
            raise InputError("tolerance must be positive")


def _rng(*key):
    return np.random.default_rng(list(key))


def _clipped(interval: Interval) -> tuple[float, float]:
    if not math.isfinite(interval.b):
        raise InputError("random sampling needs a finite interval")
    width = interval.b - interval.a
    return interval.a + _ENDPOINT_MARGIN * width, interval.b - _ENDPOINT_MARGIN * width


def _log_uniform(rng, lo: float, hi: float, n: int) -> np.ndarray:
    u = rng.random(n)
    return np.exp(math.log(lo) + u * (math.log(hi) - math.log(lo)))


def sample_grid(rng, interval: Interval, n: int, min_rel_gap: float = 0.0) -> Grid:
    """Log-uniform grid of n distinct points, clipped away from the interval
    endpoints; redraws on near-coincident points.

    ``min_rel_gap`` additionally rejects adjacent points closer than that
    fraction of their magnitude; the identity and determinant suites use it
    because their conditioning degrades when points cluster."""
    lo, hi = _clipped(interval)
    for _ in range(100):
        pts = np.sort(_log_uniform(rng, lo, hi, n))
        if min_rel_gap > 0.0 and n > 1:
            rel = np.min((pts[1:] - pts[:-1]) / pts[1:])
            if rel < min_rel_gap:
                continue
        try:
            return Grid(tuple(float(p) for p in pts), interval)
        except InputError:
            continue
    raise NumericalError(f"could not sample {n} distinct points in ({lo}, {hi})")


def sample_values(rng, interval: Interval, n: int) -> np.ndarray:
    lo, hi = _clipped(interval)
    return _log_uniform(rng, lo, hi, n)


def _check_interval_in_domain(f: FunctionSpec, interval: Interval) -> None:
    if interval.a < f.domain.a or interval.b > f.domain.b:
        raise InputError(
            f"sampling interval ({interval.a}, {interval.b}) is not contained in "
            f"the domain ({f.domain.a}, {f.domain.b}) of {f.kind}"
        )


def _find_negative_value(g: FunctionSpec, interval: Interval):
    """Scan a log-spaced mesh for a strictly negative value of g."""
    lo, hi = _clipped(interval)
    for x in np.geomspace(lo, hi, _POSITIVITY_MESH):
        if evaluate(g, float(x)) < 0.0:
            return float(x)
    return None


@dataclass(frozen=True)
class Witness:
    grid: Grid
    matrix: SymMatrix
    min_eigenvalue: float

    def to_json(self) -> dict:
        return {
            "grid": self.grid.to_json(),
            "matrix": self.matrix.to_json(),
            "min_eigenvalue": self.min_eigenvalue,
        }


@dataclass(frozen=True)
class ClassificationReport:
    property: str
    order: int
    outcome: str
    trials_run: int
    marginal_skipped: int
    seed: int
    witness: Witness | None = None

    @property
    def refuted(self) -> bool:
        return self.outcome == REFUTED

    def to_json(self) -> dict:
        out = {
            "property": self.property,
            "order": self.order,
            "outcome": self.outcome,
            "trials_run": self.trials_run,
            "marginal_skipped": self.marginal_skipped,
            "seed": self.seed,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def classification_trials(build, order: int, cfg: TrialConfig):
    """Yield (grid, matrix, decisive verdict) for each random trial."""
    for idx in range(cfg.trials):
        rng = _rng(cfg.seed, _S_CLASSIFY, order, idx)
        grid = sample_grid(rng, cfg.interval, order)
        m = build(grid)
        yield grid, m, decisive_psd_verdict(m, cfg.tolerance)


def _run_search(property_name: str, build, order: int, cfg: TrialConfig) -> ClassificationReport:
    marginal = 0
    trials_run = 0
    for grid, m, verdict in classification_trials(build, order, cfg):
        trials_run += 1
        if verdict.status is PsdStatus.NOT_PSD:
            return ClassificationReport(
                property=property_name, order=order, outcome=REFUTED,
                trials_run=trials_run, marginal_skipped=marginal, seed=cfg.seed,
                witness=Witness(grid, m, verdict.min_eigenvalue),
            )
        if verdict.status is PsdStatus.MARGINAL:
            marginal += 1
    return ClassificationReport(
        property=property_name, order=order, outcome=NO_COUNTEREXAMPLE_FOUND,
        trials_run=trials_run, marginal_skipped=marginal, seed=cfg.seed,
    )


def classify_anti_loewner(g: FunctionSpec, order: int,
                          cfg: TrialConfig | None = None) -> ClassificationReport:
    """Search for an order-N divided-sum matrix of g that is not PSD.

    A strictly negative sampled value of g refutes immediately through the
    1x1 matrix [g(x)/x]."""
    cfg = cfg or TrialConfig()
    if order < 1:
        raise InputError("order must be at least 1")
    _check_interval_in_domain(g, cfg.interval)
    bad_x = _find_negative_value(g, cfg.interval)
    if bad_x is not None:
        grid1 = Grid((bad_x,), cfg.interval)
        m = anti_loewner(g, grid1)
        return ClassificationReport(
            property=ANTI_LOEWNER, order=order, outcome=REFUTED,
            trials_run=0, marginal_skipped=0, seed=cfg.seed,
            witness=Witness(grid1, m, float(m.entries[0, 0])),
        )
    return _run_search(ANTI_LOEWNER, lambda grid: anti_loewner(g, grid), order, cfg)


def classify_matrix_monotone(f: FunctionSpec, order: int, direction: str = INCREASING,
                             cfg: TrialConfig | None = None) -> ClassificationReport:
    """Search for an order-N divided-difference matrix of f (negated for the
    decreasing variant) that is not PSD."""
    cfg = cfg or TrialConfig()
    if order < 1:
        raise InputError("order must be at least 1")
    if direction not in (INCREASING, DECREASING):
        raise InputError(f"direction must be {INCREASING!r} or {DECREASING!r}")
    _check_interval_in_domain(f, cfg.interval)
    if direction == INCREASING:
        build = lambda grid: loewner(f, grid)
        name = MATRIX_MONOTONE
    else:
        build = lambda grid: SymMatrix(-loewner(f, grid).entries)
        name = MATRIX_MONOTONE_DECREASING
    return _run_search(name, build, order, cfg)


# ---------------------------------------------------------------------------
# Determinant-sign invariance under sign flips


@dataclass(frozen=True)
class Prop1Instance:
    n: int
    vectors_checked: int
    pos: int
    neg: int
    zero: int
    consistent: bool
    duplicates_consistent: bool
    marginal: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vectors_checked": self.vectors_checked,
            "sign_counts": {"POS": self.pos, "NEG": self.neg, "ZERO": self.zero},
            "consistent": self.consistent,
            "duplicates_consistent": self.duplicates_consistent,
            "marginal": self.marginal,
        }


def _sign_vectors(n: int, cfg: TrialConfig):
    if n <= cfg.max_order:
        return [tuple(s) for s in itertools.product((1, -1), repeat=n)]
    vectors = [(1,) * n]
    for i in range(n):
        vectors.append(tuple(-1 if j == i else 1 for j in range(n)))
    rng = _rng(cfg.seed, _S_PROP1, n)
    for _ in range(SAMPLED_SIGN_VECTORS):
        vectors.append(tuple(int(v) for v in rng.choice((1, -1), size=n)))
    return list(dict.fromkeys(vectors))


def verify_prop1(gvals, grid: Grid, cfg: TrialConfig | None = None,
                 sampled: bool = False,
                 det_tolerance: float = DEFAULT_DET_TOLERANCE) -> Prop1Instance:
    """Check that det(Z_N) has one sign across sign vectors.

    Enumerates all 2^N sign vectors up to the exhaustive cap (sampled mode
    uses all-plus, its single flips, and random vectors beyond the cap).
    ZERO verdicts never count as disagreements; an instance containing one
    is flagged marginal."""
    cfg = cfg or TrialConfig()
    gv = np.asarray(gvals, dtype=np.float64)
    n = grid.size
    if gv.shape != (n,):
        raise InputError(f"need {n} g values, got shape {gv.shape}")
    if np.any(gv <= 0.0) or not np.all(np.isfinite(gv)):
        raise InputError("g values must be positive and finite")
    if n > cfg.max_order and not sampled:
        raise InputError(
            f"exhaustive sign enumeration is capped at N={cfg.max_order}; "
            f"pass sampled=True for N={n}"
        )
    x = np.array(grid.points, dtype=np.float64)
    results: dict[tuple, DetSignClass] = {}
    counts = {DetSignClass.POS: 0, DetSignClass.NEG: 0, DetSignClass.ZERO: 0}
    for s in _sign_vectors(n, cfg):
        d = det_sign(signed_matrix_from_values(x, gv, SignVector(s)), det_tolerance)
        results[s] = d.sign
        counts[d.sign] += 1
    dup_ok = True
    for s, sign in results.items():
        neg = tuple(-v for v in s)
        if neg in results and results[neg] != sign:
            dup_ok = False
    return Prop1Instance(
        n=n,
        vectors_checked=len(results),
        pos=counts[DetSignClass.POS],
        neg=counts[DetSignClass.NEG],
        zero=counts[DetSignClass.ZERO],
        consistent=not (counts[DetSignClass.POS] > 0 and counts[DetSignClass.NEG] > 0),
        duplicates_consistent=dup_ok,
        marginal=counts[DetSignClass.ZERO] > 0,
    )


@dataclass(frozen=True)
class Prop1SuiteReport:
    orders: tuple[int, ...]
    instances_per_order: int
    total_instances: int
    disagreements: int
    marginal_instances: int
    seed: int
    passed: bool

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "instances_per_order": self.instances_per_order,
            "total_instances": self.total_instances,
            "disagreements": self.disagreements,
            "marginal_instances": self.marginal_instances,
            "seed": self.seed,
            "passed": self.passed,
        }


def prop1_suite(orders, instances: int, cfg: TrialConfig | None = None,
                sampled: bool = False) -> Prop1SuiteReport:
    """Random (g, x) instances per order; passes with zero sign disagreements."""
    cfg = cfg or TrialConfig()
    orders = tuple(int(n) for n in orders)
    disagreements = 0
    marginal = 0
    total = 0
    for n in orders:
        for k in range(instances):
            rng = _rng(cfg.seed, _S_PROP1, n, k)
            grid = sample_grid(rng, cfg.interval, n, min_rel_gap=1e-3)
            gvals = sample_values(rng, cfg.interval, n)
            inst = verify_prop1(gvals, grid, cfg, sampled=sampled)
            total += 1
            if not (inst.consistent and inst.duplicates_consistent):
                disagreements += 1
            if inst.marginal:
                marginal += 1
    return Prop1SuiteReport(
        orders=orders, instances_per_order=instances, total_instances=total,
        disagreements=disagreements, marginal_instances=marginal,
        seed=cfg.seed, passed=disagreements == 0,
    )


# ---------------------------------------------------------------------------
# Partial Gaussian elimination and the D Y D factorization


@dataclass(frozen=True)
class FactorizationReport:
    n: int
    s1: int
    elimination_residual: float
    schur_residual: float
    flip_residual: float
    det_residual: float
    near_singular: bool
    passed: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s1": self.s1,
            "elimination_residual": self.elimination_residual,
            "schur_residual": self.schur_residual,
            "flip_residual": self.flip_residual,
            "det_residual": self.det_residual,
            "near_singular": self.near_singular,
            "passed": self.passed,
        }


ELIMINATION_TOL = 1e-12
SCHUR_TOL = 1e-12
FLIP_TOL = 1e-10
DET_IDENTITY_TOL = 1e-9
# The determinant identity compares two independently computed determinants,
# whose agreement is limited by cond(Z) * machine epsilon. Instances whose
# smallest pivot falls below this fraction of the matrix scale cannot meet
# DET_IDENTITY_TOL and are reported as near-singular instead of compared.
NEAR_SINGULAR_TOL = 1e-6


def _eliminate_first_column(x, g, s1):
    n = len(x)
    signs = SignVector((s1,) + (1,) * (n - 1))
    z = signed_matrix_from_values(x, g, signs)
    ze = np.array(z.entries, copy=True)
    for i in range(1, n):
        mult = (x[0] / g[0]) * ((s1 * g[0] + g[i]) / (s1 * x[0] + x[i]))
        ze[i, :] = ze[i, :] - mult * z.entries[0, :]
    return z, ze


def verify_prop1_factorization(gvals, grid: Grid,
                               s: SignVector | None = None) -> FactorizationReport:
    """Eliminate the first column of Z_N and check the closed-form Schur
    block, its D Y D structure (Y independent of the first sign), and the
    determinant identity det Z = (g_1/x_1) det(Y) det(D)^2.

    The elimination formula fixes the trailing signs at +1; the supplied
    sign vector contributes only its first entry."""
    n = grid.size
    if n < 2:
        raise InputError("the factorization check needs at least 2 points")
    g = np.asarray(gvals, dtype=np.float64)
    if g.shape != (n,):
        raise InputError(f"need {n} g values, got shape {g.shape}")
    if np.any(g <= 0.0) or not np.all(np.isfinite(g)):
        raise InputError("g values must be positive and finite")
    if s is None:
        s = SignVector.all_plus(n)
    if any(v != 1 for v in s.signs[1:]):
        raise InputError("trailing signs must be +1; only the first sign varies")
    s1 = s.signs[0]
    x = np.array(grid.points, dtype=np.float64)

    z, ze = _eliminate_first_column(x, g, s1)
    scale = z.scale()
    elim_res = float(np.max(np.abs(ze[1:, 0]))) / scale

    # Closed-form Schur block: X_ij * den_ij should equal num_ij.
    xi = x[1:]
    gi = g[1:]
    x1, g1 = x[0], g[0]
    t1 = g1 * np.add.outer(gi, gi) * (x1 * x1 + np.multiply.outer(xi, xi))
    t2 = x1 * np.add.outer(xi, xi) * (g1 * g1 + np.multiply.outer(gi, gi))
    num = t1 - t2
    den = g1 * np.add.outer(xi, xi) * np.multiply.outer(s1 * x1 + xi, s1 * x1 + xi)
    xblock = ze[1:, 1:]
    term_scale = np.abs(t1) + np.abs(t2)
    schur_res = float(np.max(np.abs(xblock * den - num) / np.maximum(term_scale, 1e-300)))

    # Y = D^-1 X D^-1 with D = diag(1/(s1 x1 + x_i)); compare s1 = +1 vs -1.
    def y_block(sign1):
        _, ze_s = _eliminate_first_column(x, g, sign1)
        d_inv = sign1 * x1 + xi
        return ze_s[1:, 1:] * np.multiply.outer(d_inv, d_inv)

    y_plus = y_block(1)
    y_minus = y_block(-1)
    y_scale = term_scale / (g1 * np.add.outer(xi, xi))
    flip_res = float(np.max(np.abs(y_plus - y_minus) / np.maximum(y_scale, 1e-300)))

    # det Z_N = (g1/x1) det(Y) det(D)^2
    y_this = y_block(s1)
    det_z = determinant(z)
    det_y = determinant(SymMatrix.from_array(y_this, tolerance=1e-6))
    det_d2 = float(np.prod(1.0 / (s1 * x1 + xi) ** 2))
    rhs = float(g1 / x1) * det_y * det_d2
    denom = max(abs(det_z), abs(rhs))
    det_res = 0.0 if denom == 0.0 else float(abs(det_z - rhs) / denom)
    near_singular = det_sign(z, tolerance=NEAR_SINGULAR_TOL).sign is DetSignClass.ZERO

    passed = bool(
        elim_res <= ELIMINATION_TOL
        and schur_res <= SCHUR_TOL
        and flip_res <= FLIP_TOL
        and (near_singular or det_res <= DET_IDENTITY_TOL)
    )
    return FactorizationReport(
        n=n, s1=s1, elimination_residual=elim_res, schur_residual=schur_res,
        flip_residual=flip_res, det_residual=det_res,
        near_singular=near_singular, passed=passed,
    )


@dataclass(frozen=True)
class FactorizationSuiteReport:
    orders: tuple[int, ...]
    instances_per_order: int
    failures: int
    near_singular_skipped: int
    max_elimination_residual: float
    max_schur_residual: float
    max_flip_residual: float
    max_det_residual: float
    seed: int
    passed: bool

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "instances_per_order": self.instances_per_order,
            "failures": self.failures,
            "near_singular_skipped": self.near_singular_skipped,
            "max_elimination_residual": self.max_elimination_residual,
            "max_schur_residual": self.max_schur_residual,
            "max_flip_residual": self.max_flip_residual,
            "max_det_residual": self.max_det_residual,
            "seed": self.seed,
            "passed": self.passed,
        }


def factorization_suite(orders, instances: int,
                        cfg: TrialConfig | None = None) -> FactorizationSuiteReport:
    cfg = cfg or TrialConfig()
    orders = tuple(int(n) for n in orders)
    failures = 0
    skipped = 0
    max_elim = max_schur = max_flip = max_det = 0.0
    # The determinant identity is conditioning-limited, so this suite keeps
    # the dynamic range of its instances to about three decades.
    lo = cfg.interval.a + 1e-3 * (cfg.interval.b - cfg.interval.a)
    moderated = Interval(lo, cfg.interval.b)
    for n in orders:
        for k in range(instances):
            rng = _rng(cfg.seed, _S_FACTOR, n, k)
            grid = sample_grid(rng, moderated, n, min_rel_gap=1e-3)
            gvals = sample_values(rng, moderated, n)
            s1 = 1 if rng.random() < 0.5 else -1
            rep = verify_prop1_factorization(
                gvals, grid, SignVector((s1,) + (1,) * (n - 1)))
            if not rep.passed:
                failures += 1
            if rep.near_singular:
                skipped += 1
            else:
                max_det = max(max_det, rep.det_residual)
            max_elim = max(max_elim, rep.elimination_residual)
            max_schur = max(max_schur, rep.schur_residual)
            max_flip = max(max_flip, rep.flip_residual)
    return FactorizationSuiteReport(
        orders=orders, instances_per_order=instances, failures=failures,
        near_singular_skipped=skipped, max_elimination_residual=max_elim,
        max_schur_residual=max_schur, max_flip_residual=max_flip,
        max_det_residual=max_det, seed=cfg.seed, passed=failures == 0,
    )


# ---------------------------------------------------------------------------
# Sum/difference identities tying the two matrix families together


@dataclass(frozen=True)
class Thm1Report:
    sum_residual: float
    diff_residual: float
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "sum_residual": self.sum_residual,
            "diff_residual": self.diff_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


THM1_TOL = 1e-11


def _sample_squarable_grid(rng, interval: Interval, n: int) -> Grid:
    # The identity checks evaluate on the squared grid as well, so both the
    # grid and its square must clear the near-coincidence rule.
    for _ in range(100):
        grid = sample_grid(rng, interval, n, min_rel_gap=1e-3)
        try:
            grid.squared()
        except InputError:
            continue
        return grid
    raise NumericalError(f"could not sample a squarable grid of size {n}")


def verify_thm1_identities(g: FunctionSpec, grid: Grid,
                           tolerance: float = THM1_TOL) -> Thm1Report:
    """Entrywise identities on a positive grid:

    K + L  ==  2 * Loewner(x -> g(sqrt x) sqrt x, grid squared)
    K - L  == -2 * D Loewner(x -> g(sqrt x)/sqrt x, grid squared) D,
    with D = diag(x_i). Residuals are relative to the scale of K and L.
    """
    k = anti_loewner(g, grid)
    lo = loewner(g, grid)
    grid2 = grid.squared()
    h1 = sqrt_transform(g, TIMES_SQRT)
    h2 = sqrt_transform(g, OVER_SQRT)
    rhs_sum = 2.0 * loewner(h1, grid2).entries
    rhs_diff = -2.0 * congruence(loewner(h2, grid2), np.array(grid.points)).entries
    scale = max(float(np.max(np.abs(k.entries))), float(np.max(np.abs(lo.entries))))
    if scale == 0.0:
        scale = 1.0
    sum_res = float(np.max(np.abs((k.entries + lo.entries) - rhs_sum))) / scale
    diff_res = float(np.max(np.abs((k.entries - lo.entries) - rhs_diff))) / scale
    return Thm1Report(
        sum_residual=sum_res, diff_residual=diff_res, tolerance=tolerance,
        passed=sum_res <= tolerance and diff_res <= tolerance,
    )


@dataclass(frozen=True)
class Thm1SuiteReport:
    functions: tuple[str, ...]
    grids_per_function: int
    max_sum_residual: float
    max_diff_residual: float
    tolerance: float
    seed: int
    passed: bool

    def to_json(self) -> dict:
        return {
            "functions": list(self.functions),
            "grids_per_function": self.grids_per_function,
            "max_sum_residual": self.max_sum_residual,
            "max_diff_residual": self.max_diff_residual,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "passed": self.passed,
        }


def thm1_suite(functions, grids_per_function: int, cfg: TrialConfig | None = None,
               sizes=(2, 3, 4, 5, 6, 7, 8), tolerance: float = THM1_TOL) -> Thm1SuiteReport:
    cfg = cfg or TrialConfig()
    names = []
    max_sum = max_diff = 0.0
    ok = True
    for name, fn in functions:
        names.append(name)
        _check_interval_in_domain(fn, cfg.interval)
        for k in range(grids_per_function):
            rng = _rng(cfg.seed, _S_THM1, k)
            n = int(sizes[int(rng.integers(len(sizes)))])
            grid = _sample_squarable_grid(rng, cfg.interval, n)
            rep = verify_thm1_identities(fn, grid, tolerance)
            max_sum = max(max_sum, rep.sum_residual)
            max_diff = max(max_diff, rep.diff_residual)
            ok = ok and rep.passed
    return Thm1SuiteReport(
        functions=tuple(names), grids_per_function=grids_per_function,
        max_sum_residual=max_sum, max_diff_residual=max_diff,
        tolerance=tolerance, seed=cfg.seed, passed=ok,
    )


# ---------------------------------------------------------------------------
# Block-matrix equivalence harness


@dataclass(frozen=True)
class Thm2Instance:
    epsilon: float
    status_prime: PsdStatus
    status_dprime: PsdStatus
    marginal: bool
    agree: bool | None

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "status_prime": self.status_prime.value,
            "status_dprime": self.status_dprime.value,
            "marginal": self.marginal,
            "agree": self.agree,
        }


def verify_thm2(g: FunctionSpec, grid: Grid, epsilon: float | None = None,
                cfg: TrialConfig | None = None,
                check_positivity: bool = True) -> Thm2Instance:
    """Build the block pair K', K'' and compare their PSD verdicts.

    The comparison is meaningful for positive g, where the sign-invariance
    of the principal minors ties the two inertias together; negative g is
    rejected. On a marginal verdict the shift is halved up to three times.
    """
    cfg = cfg or TrialConfig()
    if check_positivity:
        _check_interval_in_domain(g, cfg.interval)
        bad = _find_negative_value(g, cfg.interval)
        if bad is not None:
            raise InputError(
                f"the block-equivalence check needs g > 0; g({bad}) < 0"
            )
    eps = float(epsilon) if epsilon is not None else default_epsilon(grid)
    for attempt in range(4):
        kp, kd = theorem2_blocks(g, grid, Theorem2Config(eps))
        vp = decisive_psd_verdict(kp, cfg.tolerance)
        vd = decisive_psd_verdict(kd, cfg.tolerance)
        marginal = PsdStatus.MARGINAL in (vp.status, vd.status)
        if not marginal:
            break
        eps /= 2.0
    agree = None if marginal else (vp.status == vd.status)
    return Thm2Instance(
        epsilon=eps, status_prime=vp.status, status_dprime=vd.status,
        marginal=marginal, agree=agree,
    )


@dataclass(frozen=True)
class Thm2Report:
    instances: int
    compared: int
    agreements: int
    disagreements: int
    marginal_skipped: int
    seed: int
    passed: bool

    def to_json(self) -> dict:
        return {
            "instances": self.instances,
            "compared": self.compared,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "marginal_skipped": self.marginal_skipped,
            "seed": self.seed,
            "passed": self.passed,
        }


def thm2_suite(g: FunctionSpec, instances: int = 200,
               cfg: TrialConfig | None = None, sizes=(1, 2, 3, 4)) -> Thm2Report:
    """Random (grid, epsilon) instances; passes when every non-marginal
    instance has matching verdicts for K' and K''."""
    cfg = cfg or TrialConfig()
    _check_interval_in_domain(g, cfg.interval)
    bad = _find_negative_value(g, cfg.interval)
    if bad is not None:
        raise InputError(f"the block-equivalence check needs g > 0; g({bad}) < 0")
    agree = disagree = marginal = 0
    for idx in range(instances):
        rng = _rng(cfg.seed, _S_THM2, idx)
        n = int(sizes[int(rng.integers(len(sizes)))])
        grid = sample_grid(rng, cfg.interval, n)
        eps = (0.25 + 0.75 * rng.random()) * default_epsilon(grid)
        inst = verify_thm2(g, grid, eps, cfg, check_positivity=False)
        if inst.marginal:
            marginal += 1
        elif inst.agree:
            agree += 1
        else:
            disagree += 1
    return Thm2Report(
        instances=instances, compared=agree + disagree, agreements=agree,
        disagreements=disagree, marginal_skipped=marginal, seed=cfg.seed,
        passed=disagree == 0,
    )


# ---------------------------------------------------------------------------
# Continuity bound from the 2x2 case


@dataclass(frozen=True)
class ContinuityRow:
    x: float
    epsilon: float
    quotient: float
    bound: float
    status: PsdStatus
    bound_ok: bool
    det_residual: float

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "epsilon": self.epsilon,
            "quotient": self.quotient,
            "bound": self.bound,
            "status": self.status.value,
            "bound_ok": self.bound_ok,
            "det_residual": self.det_residual,
        }


@dataclass(frozen=True)
class ContinuityReport:
    rows: tuple[ContinuityRow, ...]
    max_det_residual: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "rows": [r.to_json() for r in self.rows],
            "max_det_residual": self.max_det_residual,
            "passed": self.passed,
        }


CONTINUITY_DET_TOL = 1e-12


def verify_continuity_bound(g: FunctionSpec, x: float, epsilons,
                            tolerance: float = 1e-9) -> ContinuityReport:
    """For each epsilon, build the 2x2 divided-sum matrix at {x, x+eps}.

    Whenever the matrix is decisively PSD the difference quotient must obey
    |(g(x+eps)-g(x))/eps| <= g(x)/x, and in all cases the closed-form
    determinant g(x)g(x+e)/(x(x+e)) - (g(x)+g(x+e))^2/(2x+e)^2 must match
    the determinant of the built matrix relative to its two terms."""
    x = float(x)
    rows = []
    max_res = 0.0
    ok = True
    for eps in epsilons:
        eps = float(eps)
        if eps <= 0.0:
            raise InputError(f"epsilon must be positive, got {eps}")
        x2 = x + eps
        gx = evaluate(g, x)
        gx2 = evaluate(g, x2)
        grid = Grid((x, x2), g.domain)
        m = anti_loewner(g, grid)
        verdict = decisive_psd_verdict(m, tolerance)
        quotient = abs((gx2 - gx) / eps)
        bound = gx / x
        bound_ok = True
        if verdict.status is PsdStatus.PSD:
            bound_ok = quotient <= bound + 1e-9 * max(1.0, bound)
        t1 = gx * gx2 / (x * x2)
        t2 = (gx + gx2) ** 2 / (2.0 * x + eps) ** 2
        det_formula = t1 - t2
        e = m.entries
        det_matrix = float(e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0])
        res = abs(det_formula - det_matrix) / max(abs(t1) + abs(t2), 1e-300)
        max_res = max(max_res, res)
        row_ok = bound_ok and res <= CONTINUITY_DET_TOL
        ok = ok and row_ok
        rows.append(ContinuityRow(
            x=x, epsilon=eps, quotient=quotient, bound=bound,
            status=verdict.status, bound_ok=bound_ok, det_residual=res,
        ))
    return ContinuityReport(rows=tuple(rows), max_det_residual=max_res, passed=ok)


def continuity_suite(g: FunctionSpec, pairs: int = 100,
                     cfg: TrialConfig | None = None) -> ContinuityReport:
    """Random (x, epsilon) pairs inside the sampling interval."""
    cfg = cfg or TrialConfig()
    _check_interval_in_domain(g, cfg.interval)
    lo, hi = _clipped(cfg.interval)
    rows = []
    max_res = 0.0
    ok = True
    for idx in range(pairs):
        rng = _rng(cfg.seed, _S_CONTINUITY, idx)
        x = float(_log_uniform(rng, lo, hi, 1)[0])
        headroom = hi - x
        if headroom <= 0.0:
            continue
        eps_hi = headroom / 2.0
        eps_lo = min(1e-6 * x, eps_hi / 2.0)
        eps = float(_log_uniform(rng, eps_lo, eps_hi, 1)[0])
        rep = verify_continuity_bound(g, x, [eps], cfg.tolerance)
        rows.extend(rep.rows)
        max_res = max(max_res, rep.max_det_residual)
        ok = ok and rep.passed
    return ContinuityReport(rows=tuple(rows), max_det_residual=max_res, passed=ok)


# ---------------------------------------------------------------------------
# Direct order-N monotonicity probe through the matrix ordering


@dataclass(frozen=True)
class ProbeWitness:
    a: SymMatrix
    b: SymMatrix
    difference: SymMatrix
    min_eigenvalue: float

    def to_json(self) -> dict:
        return {
            "A": self.a.to_json(),
            "B": self.b.to_json(),
            "difference": self.difference.to_json(),
            "min_eigenvalue": self.min_eigenvalue,
        }


@dataclass(frozen=True)
class ProbeReport:
    property: str
    order: int
    direction: str
    outcome: str
    trials_run: int
    marginal_skipped: int
    seed: int
    witness: ProbeWitness | None = None

    @property
    def refuted(self) -> bool:
        return self.outcome == REFUTED

    def to_json(self) -> dict:
        out = {
            "property": self.property,
            "order": self.order,
            "direction": self.direction,
            "outcome": self.outcome,
            "trials_run": self.trials_run,
            "marginal_skipped": self.marginal_skipped,
            "seed": self.seed,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _ordered_pair(rng, n: int, interval: Interval):
    """Random A <= B with both spectra affinely mapped into the interval,
    keeping a 5% relative margin from each endpoint."""
    if not math.isfinite(interval.b):
        raise InputError("the monotonicity probe needs a finite interval")
    width = interval.b - interval.a
    lo_target = interval.a + 0.05 * width
    hi_target = interval.b - 0.05 * width
    for _ in range(20):
        w1 = rng.standard_normal((n, n))
        a0 = 0.5 * (w1 + w1.T)
        w2 = rng.standard_normal((n, n))
        p = w2.T @ w2
        b0 = a0 + 0.5 * (p + p.T)
        wa = eigenvalues(SymMatrix(a0))
        wb = eigenvalues(SymMatrix(b0))
        lo = min(float(wa[0]), float(wb[0]))
        hi = max(float(wa[-1]), float(wb[-1]))
        if hi - lo < 1e-9:
            continue
        alpha = (hi_target - lo_target) / (hi - lo)
        beta = lo_target - alpha * lo
        eye = np.eye(n)
        return SymMatrix(alpha * a0 + beta * eye), SymMatrix(alpha * b0 + beta * eye)
    raise NumericalError("could not generate an ordered matrix pair")


def direct_monotonicity_probe(f: FunctionSpec, order: int,
                              cfg: TrialConfig | None = None,
                              direction: str = INCREASING) -> ProbeReport:
    """Sample A <= B, apply f through the spectral calculus, and look for a
    pair where f(B)-f(A) (f(A)-f(B) for the decreasing variant) is not PSD."""
    cfg = cfg or TrialConfig()
    if order < 1:
        raise InputError("order must be at least 1")
    if direction not in (INCREASING, DECREASING):
        raise InputError(f"direction must be {INCREASING!r} or {DECREASING!r}")
    marginal = 0
    for idx in range(cfg.trials):
        rng = _rng(cfg.seed, _S_PROBE, order, idx)
        a, b = _ordered_pair(rng, order, cfg.interval)
        fa = matrix_function(a, f)
        fb = matrix_function(b, f)
        if direction == INCREASING:
            diff = SymMatrix(fb.entries - fa.entries)
        else:
            diff = SymMatrix(fa.entries - fb.entries)
        verdict = decisive_psd_verdict(diff, cfg.tolerance)
        if verdict.status is PsdStatus.NOT_PSD:
            return ProbeReport(
                property="direct_monotonicity_probe", order=order,
                direction=direction, outcome=REFUTED, trials_run=idx + 1,
                marginal_skipped=marginal, seed=cfg.seed,
                witness=ProbeWitness(a, b, diff, verdict.min_eigenvalue),
            )
        if verdict.status is PsdStatus.MARGINAL:
            marginal += 1
    return ProbeReport(
        property="direct_monotonicity_probe", order=order, direction=direction,
        outcome=NO_COUNTEREXAMPLE_FOUND, trials_run=cfg.trials,
        marginal_skipped=marginal, seed=cfg.seed,
    )


# ---------------------------------------------------------------------------
# Catalog, random function generators, full battery


def random_al_rep(rng) -> AlRep:
    """Random instance of the divided-sum-positive representation; never the
    all-zero function."""
    alpha = 0.0 if rng.random() < 0.4 else float(10.0 ** rng.uniform(-1.5, 0.5))
    beta = 0.0 if rng.random() < 0.4 else float(10.0 ** rng.uniform(-1.5, 0.5))
    n_atoms = int(rng.integers(0, 4))
    if alpha == 0.0 and beta == 0.0 and n_atoms == 0:
        n_atoms = 1
    atoms = []
    for _ in range(n_atoms):
        t = 0.0 if rng.random() < 0.2 else float(10.0 ** rng.uniform(-1.0, 1.5))
        w = float(10.0 ** rng.uniform(-1.5, 0.5))
        atoms.append((t, w))
    return al_rep(alpha=alpha, beta=beta, atoms=atoms)


def random_om_rep(rng) -> OmRep:
    alpha = 0.0 if rng.random() < 0.4 else float(10.0 ** rng.uniform(-1.5, 0.5))
    beta = 0.0 if rng.random() < 0.4 else float(10.0 ** rng.uniform(-1.5, 0.5))
    n_atoms = int(rng.integers(0, 4))
    if alpha == 0.0 and beta == 0.0 and n_atoms == 0:
        n_atoms = 1
    atoms = []
    for _ in range(n_atoms):
        t = 0.0 if rng.random() < 0.2 else float(10.0 ** rng.uniform(-1.0, 1.5))
        w = float(10.0 ** rng.uniform(-1.5, 0.5))
        atoms.append((t, w))
    return om_rep(alpha=alpha, beta=beta, atoms=atoms)


def catalog() -> dict[str, FunctionSpec]:
    """Named standard functions used across the verification suites."""
    return {
        "identity": Identity(),
        "power_0.5": Power(0.5),
        "power_2": Power(2.0),
        "power_3": Power(3.0),
        "reciprocal": Reciprocal(),
        "log1p": Log1p(),
        "constant_1": Constant(1.0),
        "al_rep_a": al_rep(alpha=0.0, beta=0.0, atoms=((1.0, 1.0),)),
        "al_rep_b": al_rep(alpha=0.5, beta=0.25, atoms=((0.0, 1.0), (2.0, 3.0))),
        "om_rep_a": om_rep(alpha=1.0, beta=0.5, atoms=((2.0, 1.0),)),
        "sum_a": WeightedSum(((0.5, Power(0.5)), (2.0, Reciprocal()))),
    }


def anti_loewner_catalog() -> dict[str, FunctionSpec]:
    """Functions whose divided-sum matrices are PSD at every order."""
    full = catalog()
    return {k: full[k] for k in
            ("identity", "power_0.5", "reciprocal", "log1p", "constant_1",
             "al_rep_a", "al_rep_b")}


def full_battery(seed: int = 42) -> dict:
    """Run every verification suite at fixed sizes and collect the reports.

    The output is a plain JSON-serializable dict; identical seeds give
    byte-identical serializations."""
    cfg = TrialConfig(seed=seed)
    cat = catalog()

    out: dict = {"seed": seed}
    out["prop1"] = prop1_suite(range(2, 7), 40, cfg).to_json()
    out["prop1_factorization"] = factorization_suite(range(2, 7), 40, cfg).to_json()
    out["thm1"] = thm1_suite(list(cat.items()), 40, cfg).to_json()

    thm2_functions = ("identity", "reciprocal", "power_0.5", "al_rep_a",
                      "al_rep_b", "power_2", "power_3")
    out["thm2"] = {name: thm2_suite(cat[name], 60, cfg).to_json()
                   for name in thm2_functions}

    continuity = {}
    for name, fn in sorted(anti_loewner_catalog().items()):
        rep = continuity_suite(fn, 60, cfg)
        continuity[name] = {
            "pairs": len(rep.rows),
            "max_det_residual": rep.max_det_residual,
            "passed": rep.passed,
        }
    out["continuity"] = continuity

    spot = {}
    small_cfg = TrialConfig(trials=120, seed=seed, interval=cfg.interval)
    for name in ("power_0.5", "reciprocal", "constant_1"):
        spot[name] = classify_anti_loewner(cat[name], 4, small_cfg).to_json()
    for name in ("power_2", "power_3"):
        spot[name] = classify_anti_loewner(cat[name], 2, small_cfg).to_json()
    out["classification"] = spot

    passed = (
        out["prop1"]["passed"]
        and out["prop1_factorization"]["passed"]
        and out["thm1"]["passed"]
        and all(r["passed"] for r in out["thm2"].values())
        and all(r["passed"] for r in out["continuity"].values())
        and all(spot[n]["outcome"] == NO_COUNTEREXAMPLE_FOUND
                for n in ("power_0.5", "reciprocal", "constant_1"))
        and all(spot[n]["outcome"] == REFUTED for n in ("power_2", "power_3"))
    )
    out["passed"] = passed
    return out
