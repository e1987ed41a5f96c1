"""Lyapunov-type equation AX + XA = g(A)B + Bg(A).

For symmetric positive definite A the solution reduces, in the eigenbasis of
A, to an entrywise product of B with the divided-sum matrix of g on the
eigenvalues; for exactly diagonal A with B the all-ones matrix the solution
IS that matrix, computed through the same fill kernel as the builder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from antiloewner import _kernels
from antiloewner.errors import DomainError, InputError
from antiloewner.functions import FunctionSpec, evaluate, parse_spec
from antiloewner.linalg import (
    DEFAULT_PSD_TOLERANCE,
    PsdVerdict,
    SymMatrix,
    eigh,
    psd_verdict,
)


@dataclass(frozen=True)
class LyapunovProblem:
    """Positive definite A, symmetric B of the same dimension, and a scalar
    function g whose domain covers the spectrum of A."""

    A: SymMatrix
    B: SymMatrix
    g: FunctionSpec

    def __post_init__(self):
        if self.A.dim != self.B.dim:
            raise InputError(
                f"A and B dimensions differ: {self.A.dim} vs {self.B.dim}"
            )

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "B": self.B.to_json(), "g": self.g.to_json()}


def load_problem(source) -> LyapunovProblem:
    """Build a problem from a JSON file path or an already parsed dict."""
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            source = json.load(fh)
    if not isinstance(source, dict):
        raise InputError("problem document must be a JSON object")
    for key in ("A", "B", "g"):
        if key not in source:
            raise InputError(f'problem document is missing the "{key}" field')
    return LyapunovProblem(
        A=SymMatrix.from_json(source["A"]),
        B=SymMatrix.from_json(source["B"]),
        g=parse_spec(source["g"]),
    )


@dataclass(frozen=True)
class Certification:
    """Solution bundle: X, the PSD verdict on it, the relative residual of
    the original equation, and optionally the strict-definiteness check."""

    solution: SymMatrix
    verdict: PsdVerdict
    residual: float
    strictly_definite: bool | None = None

    def to_json(self) -> dict:
        out = {
            "solution": self.solution.to_json(),
            "verdict": self.verdict.to_json(),
            "residual": self.residual,
        }
        if self.strictly_definite is not None:
            out["strictly_definite"] = self.strictly_definite
        return out


def _is_exactly_diagonal(m: SymMatrix) -> bool:
    e = m.entries
    return bool(np.array_equal(e, np.diag(np.diag(e))))


def _check_spectrum(values, g: FunctionSpec, positive: bool) -> None:
    for lam in values:
        lam = float(lam)
        if positive and lam <= 0.0:
            raise InputError(f"A is not positive definite: eigenvalue {lam!r}")
        if not g.domain.contains(lam):
            raise DomainError(
                f"eigenvalue {lam!r} of A lies outside the domain "
                f"({g.domain.a}, {g.domain.b}) of g"
            )


def _symmetrized(raw: np.ndarray) -> SymMatrix:
    return SymMatrix(0.5 * (raw + raw.T))


def solve(p: LyapunovProblem) -> SymMatrix:
    """Solve AX + XA = g(A)B + Bg(A) for X.

    Exactly diagonal A keeps the fast path: X_ij = K_ij * B_ij where K is
    the divided-sum matrix on the diagonal entries, produced by the same
    kernel as the builder. General A goes through its eigendecomposition.
    """
    if _is_exactly_diagonal(p.A):
        diag = np.diag(p.A.entries).copy()
        _check_spectrum(diag, p.g, positive=True)
        gvals = np.array([evaluate(p.g, v) for v in diag], dtype=np.float64)
        k = _kernels.fill_anti_loewner(diag, gvals)
        return SymMatrix(k * p.B.entries)

    w, q = eigh(p.A)
    _check_spectrum(w, p.g, positive=True)
    gvals = np.array([evaluate(p.g, v) for v in w], dtype=np.float64)
    k = _kernels.fill_anti_loewner(w, gvals)
    b_tilde = q.T @ p.B.entries @ q
    b_tilde = 0.5 * (b_tilde + b_tilde.T)
    x_tilde = k * b_tilde
    return _symmetrized(q @ x_tilde @ q.T)


def matrix_function(A: SymMatrix, f: FunctionSpec) -> SymMatrix:
    """Functional calculus Q f(Lambda) Q^T through the eigendecomposition."""
    if _is_exactly_diagonal(A):
        diag = np.diag(A.entries)
        for lam in diag:
            if not f.domain.contains(float(lam)):
                raise DomainError(
                    f"eigenvalue {float(lam)!r} of A lies outside the domain "
                    f"({f.domain.a}, {f.domain.b}) of {f.kind}"
                )
        return SymMatrix(np.diag([evaluate(f, v) for v in diag]))
    w, q = eigh(A)
    for lam in w:
        if not f.domain.contains(float(lam)):
            raise DomainError(
                f"eigenvalue {float(lam)!r} of A lies outside the domain "
                f"({f.domain.a}, {f.domain.b}) of {f.kind}"
            )
    fvals = np.array([evaluate(f, v) for v in w], dtype=np.float64)
    return _symmetrized((q * fvals[None, :]) @ q.T)


def equation_residual(p: LyapunovProblem, x: SymMatrix) -> float:
    """Relative Frobenius residual of AX + XA = g(A)B + Bg(A)."""
    a = p.A.entries
    b = p.B.entries
    ga = matrix_function(p.A, p.g).entries
    rhs = ga @ b + b @ ga
    lhs = a @ x.entries + x.entries @ a
    denom = max(1.0, float(np.linalg.norm(rhs)))
    return float(np.linalg.norm(lhs - rhs)) / denom


def certify(p: LyapunovProblem, tolerance: float = DEFAULT_PSD_TOLERANCE,
            strict_pd: bool = False) -> Certification:
    """Solve and classify X, reporting the equation residual.

    With ``strict_pd`` the certification additionally records whether the
    minimum eigenvalue clears +tolerance*scale (positive definite with
    margin, not merely semidefinite)."""
    x = solve(p)
    verdict = psd_verdict(x, tolerance)
    residual = equation_residual(p, x)
    strictly = None
    if strict_pd:
        strictly = verdict.min_eigenvalue > tolerance * verdict.scale
    return Certification(solution=x, verdict=verdict, residual=residual,
                         strictly_definite=strictly)
