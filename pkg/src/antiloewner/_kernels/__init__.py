"""Kernel backend selection.

The compiled extension is preferred when present; ``pure`` is a drop-in
fallback producing bit-identical results. Set ``ALW_BACKEND=pure`` or
``ALW_BACKEND=native`` to force a backend (forcing ``native`` fails loudly if
the extension is missing), or call :func:`set_backend` from code, as the
benchmark and the cross-backend tests do.
"""

from __future__ import annotations

import os

from antiloewner._kernels import pure as _pure

try:
    from antiloewner._kernels import _native as _native
except ImportError:  # extension not built; fall back silently
    _native = None

_BACKENDS = {"pure": _pure}
if _native is not None:
    _BACKENDS["native"] = _native
    # The twin implementations must agree on their tuning constants.
    assert _native.MAX_SWEEPS == _pure.MAX_SWEEPS
    assert _native.OFF_REL_CUTOFF == _pure.OFF_REL_CUTOFF
    assert _native.PIVOT_ALPHA == _pure.PIVOT_ALPHA


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise RuntimeError(
            f"kernel backend {name!r} is not available; "
            f"choose from {available_backends()}"
        ) from None


_env = os.environ.get("ALW_BACKEND", "").strip().lower()
if _env:
    _active = get_backend(_env)
else:
    _active = _native if _native is not None else _pure


def set_backend(name: str) -> None:
    global _active
    _active = get_backend(name)


def backend_name() -> str:
    return _active.BACKEND


def jacobi_eigh(a, want_vectors=True):
    return _active.jacobi_eigh(a, want_vectors)


def ldlt_sign_logdet(a):
    return _active.ldlt_sign_logdet(a)


def fill_loewner(x, fx, dfx):
    return _active.fill_loewner(x, fx, dfx)


def fill_anti_loewner(x, gx):
    return _active.fill_anti_loewner(x, gx)


def fill_signed(x, gx, s):
    return _active.fill_signed(x, gx, s)


def fill_gram(x, t):
    return _active.fill_gram(x, t)
