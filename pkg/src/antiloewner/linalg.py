"""Dense symmetric linear algebra.

Eigenvalues via cyclic Jacobi rotations, PSD verdicts with an explicit
tolerance band, determinant signs via pivoted LDL^T (eigenvalue-product
fallback), rank estimation, and congruence transforms. All operations are
pure functions on immutable values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from antiloewner import _kernels
from antiloewner.errors import InputError, NumericalError

DEFAULT_PSD_TOLERANCE = 1e-9
DEFAULT_DET_TOLERANCE = 1e-12
DEFAULT_RANK_TOLERANCE = 1e-8
SYMMETRY_LOAD_TOLERANCE = 1e-12


class SymMatrix:
    """Dense real symmetric matrix with exactly mirrored triangles.

    Builders write both triangles from a single formula evaluation per
    unordered pair, so ``entries[i, j] == entries[j, i]`` holds exactly, not
    merely to tolerance. The backing array is read-only.
    """

    __slots__ = ("_m",)

    def __init__(self, entries):
        m = np.array(entries, dtype=np.float64, order="C", copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"matrix must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise InputError("matrix dimension must be at least 1")
        if not np.all(np.isfinite(m)):
            raise InputError("matrix entries must be finite")
        if not np.array_equal(m, m.T):
            raise InputError(
                "matrix must be exactly symmetric; use SymMatrix.from_array "
                "to symmetrize nearly symmetric data"
            )
        m.setflags(write=False)
        self._m = m

    @classmethod
    def from_array(cls, entries, tolerance: float = SYMMETRY_LOAD_TOLERANCE):
        """Accept nearly symmetric data, validating |m - m^T| against
        ``tolerance * scale`` and then symmetrizing by averaging."""
        m = np.array(entries, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InputError("matrix entries must be finite")
        scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
        skew = float(np.max(np.abs(m - m.T)))
        if skew > tolerance * scale:
            raise InputError(
                f"matrix is not symmetric: max |m - m^T| = {skew:g} exceeds "
                f"{tolerance:g} * scale = {tolerance * scale:g}"
            )
        return cls(0.5 * (m + m.T))

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._m

    def scale(self) -> float:
        """Largest absolute entry, floored at 1 (tolerance reference)."""
        return max(1.0, float(np.max(np.abs(self._m))))

    def submatrix(self, indices) -> "SymMatrix":
        idx = np.asarray(indices, dtype=np.intp)
        return SymMatrix(self._m[np.ix_(idx, idx)])

    def __repr__(self):
        return f"SymMatrix(dim={self.dim})"

    def to_json(self) -> dict:
        return {"dim": self.dim, "entries": [list(row) for row in self._m.tolist()]}

    @classmethod
    def from_json(cls, obj: dict) -> "SymMatrix":
        if not isinstance(obj, dict) or "entries" not in obj:
            raise InputError('matrix document must be an object with an "entries" field')
        entries = obj["entries"]
        m = cls.from_array(entries)
        if "dim" in obj and int(obj["dim"]) != m.dim:
            raise InputError(f'declared dim {obj["dim"]} does not match entries ({m.dim})')
        return m


def load_matrix(path) -> SymMatrix:
    with open(Path(path)) as fh:
        return SymMatrix.from_json(json.load(fh))


class PsdStatus(str, Enum):
    PSD = "PSD"
    NOT_PSD = "NOT_PSD"
    MARGINAL = "MARGINAL"


class DetSignClass(str, Enum):
    POS = "POS"
    NEG = "NEG"
    ZERO = "ZERO"


@dataclass(frozen=True)
class PsdVerdict:
    status: PsdStatus
    min_eigenvalue: float
    scale: float
    tolerance: float

    @property
    def marginal(self) -> bool:
        """Whether the minimum eigenvalue lies inside the tolerance band,
        i.e. the sign of the decisive eigenvalue cannot be trusted."""
        return abs(self.min_eigenvalue) <= self.tolerance * self.scale

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "min_eigenvalue": self.min_eigenvalue,
            "scale": self.scale,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class DetSign:
    sign: DetSignClass
    log_abs_det: float
    method: str = "ldlt"

    def to_json(self) -> dict:
        return {"sign": self.sign.value, "log_abs_det": self.log_abs_det, "method": self.method}


def eigh(m: SymMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""
    w, v, converged = _kernels.jacobi_eigh(m.entries, want_vectors=True)
    if not converged:
        raise NumericalError("Jacobi eigensolver did not converge within 100 sweeps")
    return w, v


def eigenvalues(m: SymMatrix) -> np.ndarray:
    """All eigenvalues in ascending order."""
    w, _, converged = _kernels.jacobi_eigh(m.entries, want_vectors=False)
    if not converged:
        raise NumericalError("Jacobi eigensolver did not converge within 100 sweeps")
    return w


def psd_verdict(m: SymMatrix, tolerance: float = DEFAULT_PSD_TOLERANCE) -> PsdVerdict:
    """Classify a matrix as PSD or NOT_PSD at the given tolerance.

    PSD means the minimum eigenvalue is at least -tolerance*scale; zero
    eigenvalues (rank-deficient PSD matrices) therefore classify as PSD.
    Use :func:`decisive_psd_verdict` where a near-zero minimum eigenvalue
    must withhold the verdict instead.
    """
    if tolerance <= 0.0:
        raise InputError("tolerance must be positive")
    w = eigenvalues(m)
    min_eig = float(w[0])
    scale = m.scale()
    if min_eig < -tolerance * scale:
        status = PsdStatus.NOT_PSD
    else:
        status = PsdStatus.PSD
    return PsdVerdict(status=status, min_eigenvalue=min_eig, scale=scale, tolerance=tolerance)


def decisive_psd_verdict(m: SymMatrix, tolerance: float = DEFAULT_PSD_TOLERANCE) -> PsdVerdict:
    """PSD verdict that is withheld (MARGINAL) inside the tolerance band.

    Sign-based suites use this variant: an instance whose decisive
    eigenvalue magnitude falls below tolerance*scale must be excluded from
    pass/fail decisions rather than misclassified.
    """
    v = psd_verdict(m, tolerance)
    if v.marginal:
        return replace(v, status=PsdStatus.MARGINAL)
    return v


def det_sign(m: SymMatrix, tolerance: float = DEFAULT_DET_TOLERANCE) -> DetSign:
    """Sign of the determinant with a reliable near-zero classification.

    Computed by LDL^T with symmetric pivoting; the sign is reported as ZERO
    when the smallest pivot falls below tolerance relative to the matrix
    scale. When no acceptably large diagonal pivot exists the sign comes
    from the eigenvalue product instead.
    """
    if tolerance <= 0.0:
        raise InputError("tolerance must be positive")
    status, sign, logabs, minrel = _kernels.ldlt_sign_logdet(m.entries)
    if status == 0:
        if sign == 0 or minrel <= tolerance:
            return DetSign(DetSignClass.ZERO, logabs, "ldlt")
        return DetSign(DetSignClass.POS if sign > 0 else DetSignClass.NEG, logabs, "ldlt")

    w = eigenvalues(m)
    scale = m.scale()
    logabs = 0.0
    negatives = 0
    zero = False
    for lam in w:
        a = abs(float(lam))
        if a <= tolerance * scale:
            zero = True
        logabs += math.log(a) if a > 0.0 else -math.inf
        if lam < 0.0:
            negatives += 1
    if zero:
        return DetSign(DetSignClass.ZERO, logabs, "eigen")
    return DetSign(DetSignClass.NEG if negatives % 2 else DetSignClass.POS, logabs, "eigen")


def determinant(m: SymMatrix) -> float:
    """Signed determinant value (small matrices; may overflow for large ones)."""
    d = det_sign(m, tolerance=1e-300)
    if d.sign is DetSignClass.ZERO:
        return 0.0
    value = math.exp(d.log_abs_det)
    return -value if d.sign is DetSignClass.NEG else value


def numerical_rank(m: SymMatrix, rel_tol: float = DEFAULT_RANK_TOLERANCE) -> int:
    """Number of eigenvalues exceeding rel_tol times the largest magnitude."""
    if not 0.0 < rel_tol < 1.0:
        raise InputError("rel_tol must lie in (0, 1)")
    w = np.abs(eigenvalues(m))
    wmax = float(np.max(w))
    if wmax == 0.0:
        return 0
    return int(np.count_nonzero(w > rel_tol * wmax))


def congruence(m: SymMatrix, weights) -> SymMatrix:
    """Two-sided diagonal scaling D M D with entries d_i m_ij d_j.

    Preserves inertia (Sylvester), hence the PSD status of the input.
    """
    d = np.asarray(weights, dtype=np.float64)
    if d.ndim != 1 or d.shape[0] != m.dim:
        raise InputError(f"need {m.dim} weights, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise InputError("weights must be finite")
    if np.any(d == 0.0):
        raise InputError("weights must be nonzero")
    out = d[:, None] * m.entries * d[None, :]
    out = np.triu(out) + np.triu(out, 1).T
    return SymMatrix(out)


def matrix_scale(m: SymMatrix) -> float:
    return m.scale()
