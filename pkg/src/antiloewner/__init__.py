"""Loewner and anti-Loewner matrix toolkit.

Builds matrices of divided differences and divided sums from declarative
function specifications, classifies functions by positivity order through
seeded counterexample search, checks the exact identities tying the two
matrix families together, and solves the associated Lyapunov-type equation.
"""

__version__ = "0.1.0"

from antiloewner.errors import (
    AntiLoewnerError,
    ConstructionError,
    DomainError,
    InputError,
    NumericalError,
    SchemaError,
)
from antiloewner.linalg import (
    DetSign,
    DetSignClass,
    PsdStatus,
    PsdVerdict,
    SymMatrix,
    congruence,
    decisive_psd_verdict,
    det_sign,
    eigenvalues,
    numerical_rank,
    psd_verdict,
)

__all__ = [
    "__version__",
    "AntiLoewnerError",
    "ConstructionError",
    "DomainError",
    "InputError",
    "NumericalError",
    "SchemaError",
    "DetSign",
    "DetSignClass",
    "PsdStatus",
    "PsdVerdict",
    "SymMatrix",
    "congruence",
    "decisive_psd_verdict",
    "det_sign",
    "eigenvalues",
    "numerical_rank",
    "psd_verdict",
]
