"""Declarative scalar-function catalog with exact derivatives.

A FunctionSpec describes a real function on an open interval (a, b) with
0 <= a < b: simple catalog kinds (identity, powers, reciprocal, log1p,
constants), two integral-representation kinds backed by finite atomic
measures, sampled tables interpolated by a monotone-safe cubic Hermite
scheme, nonnegative weighted sums, and composite kinds produced by
:func:`sqrt_transform` and :func:`reciprocal_of`. Values are immutable after
construction and evaluation is pure.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field

from antiloewner.errors import DomainError, InputError, SchemaError

TIMES_SQRT = "times_sqrt"
OVER_SQRT = "over_sqrt"


@dataclass(frozen=True)
class Interval:
    """Open interval (a, b) with 0 <= a < b; b may be infinite."""

    a: float
    b: float

    def __post_init__(self):
        a = float(self.a)
        b = float(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not math.isfinite(a) or a < 0.0:
            raise InputError(f"interval start must be finite and >= 0, got {a}")
        if math.isnan(b) or b <= a:
            raise InputError(f"interval must satisfy a < b, got ({a}, {b})")

    def contains(self, x: float) -> bool:
        return self.a < x < self.b

    def squared(self) -> "Interval":
        return Interval(self.a * self.a, self.b * self.b if math.isfinite(self.b) else math.inf)

    def to_json(self) -> list:
        return [self.a, "inf" if math.isinf(self.b) else self.b]

    @classmethod
    def from_json(cls, obj, path: str = "domain") -> "Interval":
        if not isinstance(obj, (list, tuple)) or len(obj) != 2:
            raise SchemaError(path, "expected [a, b] with b a number or \"inf\"")
        a = _schema_number(obj[0], f"{path}[0]")
        raw_b = obj[1]
        if raw_b == "inf":
            b = math.inf
        else:
            b = _schema_number(raw_b, f"{path}[1]")
        if not math.isfinite(a) or a < 0.0:
            raise SchemaError(path, f"a must be finite and >= 0, got {a}")
        if b <= a:
            raise SchemaError(path, "a < b violated")
        return cls(a, b)


_DEFAULT_DOMAIN = Interval(0.0, math.inf)


class FunctionSpec:
    """Base class; concrete kinds implement value/deriv on the open domain."""

    kind: str = "abstract"
    domain: Interval

    def value(self, x: float) -> float:
        raise NotImplementedError

    def deriv(self, x: float) -> float:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def describe(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def evaluate(f: FunctionSpec, x: float) -> float:
    """Evaluate f at a point strictly inside its domain."""
    x = float(x)
    if not f.domain.contains(x):
        raise DomainError(
            f"x={x!r} is outside the open domain ({f.domain.a}, {f.domain.b}) of {f.kind}"
        )
    try:
        y = f.value(x)
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise DomainError(f"{f.kind} failed to evaluate at x={x!r}: {exc}") from None
    if not math.isfinite(y):
        raise DomainError(f"{f.kind} evaluated at x={x!r} is not finite")
    return y


def derivative(f: FunctionSpec, x: float) -> float:
    """Exact derivative of f at a point strictly inside its domain."""
    x = float(x)
    if not f.domain.contains(x):
        raise DomainError(
            f"x={x!r} is outside the open domain ({f.domain.a}, {f.domain.b}) of {f.kind}"
        )
    try:
        d = f.deriv(x)
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise DomainError(f"derivative of {f.kind} failed at x={x!r}: {exc}") from None
    if not math.isfinite(d):
        raise DomainError(f"derivative of {f.kind} at x={x!r} is not finite")
    return d


@dataclass(frozen=True)
class Identity(FunctionSpec):
    domain: Interval = _DEFAULT_DOMAIN
    kind = "identity"

    def value(self, x):
        return x

    def deriv(self, x):
        return 1.0

    def to_json(self):
        return {"kind": "identity", "domain": self.domain.to_json()}


@dataclass(frozen=True)
class Power(FunctionSpec):
    p: float
    domain: Interval = _DEFAULT_DOMAIN
    kind = "power"

    def __post_init__(self):
        if not math.isfinite(self.p):
            raise InputError("power exponent must be finite")

    def value(self, x):
        return x ** self.p

    def deriv(self, x):
        return self.p * x ** (self.p - 1.0)

    def to_json(self):
        return {"kind": "power", "p": self.p, "domain": self.domain.to_json()}


@dataclass(frozen=True)
class Reciprocal(FunctionSpec):
    domain: Interval = _DEFAULT_DOMAIN
    kind = "reciprocal"

    def value(self, x):
        return 1.0 / x

    def deriv(self, x):
        return -1.0 / (x * x)

    def to_json(self):
        return {"kind": "reciprocal", "domain": self.domain.to_json()}


@dataclass(frozen=True)
class Log1p(FunctionSpec):
    domain: Interval = _DEFAULT_DOMAIN
    kind = "log1p"

    def value(self, x):
        return math.log1p(x)

    def deriv(self, x):
        return 1.0 / (1.0 + x)

    def to_json(self):
        return {"kind": "log1p", "domain": self.domain.to_json()}


@dataclass(frozen=True)
class Constant(FunctionSpec):
    c: float
    domain: Interval = _DEFAULT_DOMAIN
    kind = "constant"

    def __post_init__(self):
        if not math.isfinite(self.c) or self.c < 0.0:
            raise InputError(f"constant must be finite and >= 0, got {self.c}")

    def value(self, x):
        return self.c

    def deriv(self, x):
        return 0.0

    def to_json(self):
        return {"kind": "constant", "c": self.c, "domain": self.domain.to_json()}


@dataclass(frozen=True)
class IntegralRepSpec:
    """Finite atomic measure with affine part: alpha, beta >= 0 and atoms
    (t_k, w_k) with t_k >= 0, w_k > 0."""

    alpha: float
    beta: float
    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple((float(t), float(w)) for t, w in self.atoms))
        if not math.isfinite(self.alpha) or self.alpha < 0.0:
            raise InputError(f"alpha must be finite and >= 0, got {self.alpha}")
        if not math.isfinite(self.beta) or self.beta < 0.0:
            raise InputError(f"beta must be finite and >= 0, got {self.beta}")
        for t, w in self.atoms:
            if not math.isfinite(t) or t < 0.0:
                raise InputError(f"atom location must be finite and >= 0, got {t}")
            if not math.isfinite(w) or w <= 0.0:
                raise InputError(f"atom weight must be finite and > 0, got {w}")

    @property
    def is_zero(self) -> bool:
        return self.alpha == 0.0 and self.beta == 0.0 and not self.atoms


@dataclass(frozen=True)
class OmRep(FunctionSpec):
    """Operator-monotone integral representation
    f(x) = alpha + beta*x + sum_k w_k * x/(t_k + x)."""

    rep: IntegralRepSpec
    domain: Interval = _DEFAULT_DOMAIN
    kind = "om_rep"

    def value(self, x):
        acc = self.rep.alpha + self.rep.beta * x
        for t, w in self.rep.atoms:
            acc += w * x / (t + x)
        return acc

    def deriv(self, x):
        acc = self.rep.beta
        for t, w in self.rep.atoms:
            d = t + x
            acc += w * t / (d * d)
        return acc

    def to_json(self):
        return {
            "kind": "om_rep",
            "alpha": self.rep.alpha,
            "beta": self.rep.beta,
            "atoms": [[t, w] for t, w in self.rep.atoms],
            "domain": self.domain.to_json(),
        }


@dataclass(frozen=True)
class AlRep(FunctionSpec):
    """Divided-sum-positive integral representation
    g(x) = alpha/x + beta*x + sum_k w_k * x/(t_k + x^2)."""

    rep: IntegralRepSpec
    domain: Interval = _DEFAULT_DOMAIN
    kind = "al_rep"

    def value(self, x):
        acc = self.rep.beta * x
        if self.rep.alpha != 0.0:
            acc += self.rep.alpha / x
        for t, w in self.rep.atoms:
            acc += w * x / (t + x * x)
        return acc

    def deriv(self, x):
        acc = self.rep.beta
        if self.rep.alpha != 0.0:
            acc -= self.rep.alpha / (x * x)
        for t, w in self.rep.atoms:
            d = t + x * x
            acc += w * (t - x * x) / (d * d)
        return acc

    def to_json(self):
        return {
            "kind": "al_rep",
            "alpha": self.rep.alpha,
            "beta": self.rep.beta,
            "atoms": [[t, w] for t, w in self.rep.atoms],
            "domain": self.domain.to_json(),
        }


def om_rep(alpha=0.0, beta=0.0, atoms=(), domain=None) -> OmRep:
    return OmRep(IntegralRepSpec(float(alpha), float(beta), tuple(atoms)),
                 domain or _DEFAULT_DOMAIN)


def al_rep(alpha=0.0, beta=0.0, atoms=(), domain=None) -> AlRep:
    return AlRep(IntegralRepSpec(float(alpha), float(beta), tuple(atoms)),
                 domain or _DEFAULT_DOMAIN)


def _hermite_slopes(knots, values):
    # Three-point slope estimates clamped so the interpolant cannot
    # overshoot the data (keeps sampled positive functions positive).
    n = len(knots)
    h = [knots[i + 1] - knots[i] for i in range(n - 1)]
    delta = [(values[i + 1] - values[i]) / h[i] for i in range(n - 1)]
    d = [0.0] * n
    for i in range(1, n - 1):
        if delta[i - 1] * delta[i] <= 0.0:
            d[i] = 0.0
        else:
            di = (h[i] * delta[i - 1] + h[i - 1] * delta[i]) / (h[i - 1] + h[i])
            cap = 3.0 * min(abs(delta[i - 1]), abs(delta[i]))
            if abs(di) > cap:
                di = math.copysign(cap, di)
            d[i] = di

    def endpoint(h0, h1, d0, d1):
        s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
        if s * d0 <= 0.0:
            return 0.0
        if abs(s) > 3.0 * abs(d0):
            return 3.0 * d0
        return s

    d[0] = endpoint(h[0], h[1], delta[0], delta[1])
    d[-1] = endpoint(h[-1], h[-2], delta[-1], delta[-2])
    return tuple(d)


@dataclass(frozen=True)
class TableFunction(FunctionSpec):
    """Sampled function interpolated by monotone-safe piecewise cubic
    Hermite polynomials; reproduces the knot values exactly."""

    knots: tuple[float, ...]
    values: tuple[float, ...]
    domain: Interval = None
    slopes: tuple[float, ...] = field(default=None, repr=False, compare=False)
    kind = "table"

    def __post_init__(self):
        knots = tuple(float(k) for k in self.knots)
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        if len(knots) < 4:
            raise InputError(f"table needs at least 4 knots, got {len(knots)}")
        if len(values) != len(knots):
            raise InputError("table values must match knots in length")
        if knots[0] < 0.0:
            raise InputError("table knots must be >= 0")
        for a, b in zip(knots, knots[1:]):
            if not b > a:
                raise InputError("table knots must be strictly increasing")
        for v in values:
            if not math.isfinite(v) or v <= 0.0:
                raise InputError("table values must be finite and positive")
        if self.domain is None:
            object.__setattr__(self, "domain", Interval(knots[0], knots[-1]))
        object.__setattr__(self, "slopes", _hermite_slopes(knots, values))

    def _segment(self, x):
        i = bisect.bisect_right(self.knots, x) - 1
        i = min(max(i, 0), len(self.knots) - 2)
        return i

    def value(self, x):
        i = self._segment(x)
        h = self.knots[i + 1] - self.knots[i]
        t = (x - self.knots[i]) / h
        y0, y1 = self.values[i], self.values[i + 1]
        d0, d1 = self.slopes[i], self.slopes[i + 1]
        h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t)
        h10 = t * (1.0 - t) * (1.0 - t)
        h01 = t * t * (3.0 - 2.0 * t)
        h11 = t * t * (t - 1.0)
        return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1

    def deriv(self, x):
        i = self._segment(x)
        h = self.knots[i + 1] - self.knots[i]
        t = (x - self.knots[i]) / h
        y0, y1 = self.values[i], self.values[i + 1]
        d0, d1 = self.slopes[i], self.slopes[i + 1]
        dh00 = 6.0 * t * (t - 1.0)
        dh10 = (1.0 - t) * (1.0 - 3.0 * t)
        dh01 = 6.0 * t * (1.0 - t)
        dh11 = t * (3.0 * t - 2.0)
        return (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1

    def to_json(self):
        return {
            "kind": "table",
            "knots": list(self.knots),
            "values": list(self.values),
            "domain": self.domain.to_json(),
        }


@dataclass(frozen=True)
class WeightedSum(FunctionSpec):
    """Nonnegative combination sum_k w_k f_k(x)."""

    terms: tuple[tuple[float, FunctionSpec], ...]
    domain: Interval = None
    kind = "sum"

    def __post_init__(self):
        terms = tuple((float(w), f) for w, f in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise InputError("sum needs at least one term")
        for w, _ in terms:
            if not math.isfinite(w) or w < 0.0:
                raise InputError(f"sum weights must be finite and >= 0, got {w}")
        lo = max(f.domain.a for _, f in terms)
        hi = min(f.domain.b for _, f in terms)
        if self.domain is None:
            if hi <= lo:
                raise InputError("sum terms have no common domain")
            object.__setattr__(self, "domain", Interval(lo, hi))
        elif self.domain.a < lo or self.domain.b > hi:
            raise InputError(
                f"sum domain ({self.domain.a}, {self.domain.b}) is not contained "
                f"in the common term domain ({lo}, {hi})"
            )

    def value(self, x):
        return sum(w * f.value(x) for w, f in self.terms)

    def deriv(self, x):
        return sum(w * f.deriv(x) for w, f in self.terms)

    def to_json(self):
        return {
            "kind": "sum",
            "terms": [{"weight": w, "spec": f.to_json()} for w, f in self.terms],
            "domain": self.domain.to_json(),
        }


@dataclass(frozen=True)
class SqrtTransform(FunctionSpec):
    """h(x) = g(sqrt(x)) * sqrt(x) or g(sqrt(x)) / sqrt(x) on the squared
    domain; evaluation delegates to the inner function."""

    inner: FunctionSpec
    times: bool
    domain: Interval = None

    def __post_init__(self):
        if self.domain is None:
            object.__setattr__(self, "domain", self.inner.domain.squared())

    @property
    def kind(self):
        return "sqrt_times" if self.times else "sqrt_over"

    def value(self, x):
        u = math.sqrt(x)
        g = self.inner.value(u)
        return g * u if self.times else g / u

    def deriv(self, x):
        u = math.sqrt(x)
        g = self.inner.value(u)
        dg = self.inner.deriv(u)
        if self.times:
            return (dg * u + g) / (2.0 * u)
        return (dg * u - g) / (2.0 * u * u * u)

    def to_json(self):
        return {"kind": self.kind, "inner": self.inner.to_json(),
                "domain": self.domain.to_json()}


@dataclass(frozen=True)
class ReciprocalOf(FunctionSpec):
    """Pointwise reciprocal 1/g(x) of a positive function."""

    inner: FunctionSpec
    domain: Interval = None
    kind = "reciprocal_of"

    def __post_init__(self):
        if self.domain is None:
            object.__setattr__(self, "domain", self.inner.domain)

    def value(self, x):
        return 1.0 / self.inner.value(x)

    def deriv(self, x):
        g = self.inner.value(x)
        return -self.inner.deriv(x) / (g * g)

    def to_json(self):
        return {"kind": "reciprocal_of", "inner": self.inner.to_json(),
                "domain": self.domain.to_json()}


def sqrt_transform(g: FunctionSpec, direction: str) -> FunctionSpec:
    """Compose g with the square root: TIMES_SQRT gives g(sqrt(x))*sqrt(x),
    OVER_SQRT gives g(sqrt(x))/sqrt(x), both on the squared domain."""
    if direction not in (TIMES_SQRT, OVER_SQRT):
        raise InputError(f"direction must be {TIMES_SQRT!r} or {OVER_SQRT!r}")
    return SqrtTransform(inner=g, times=direction == TIMES_SQRT)


def reciprocal_of(g: FunctionSpec) -> FunctionSpec:
    return ReciprocalOf(inner=g)


def _schema_number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {value!r}")
    v = float(value)
    if math.isnan(v):
        raise SchemaError(path, "NaN is not allowed")
    return v


def _parse_atoms(obj, path):
    if not isinstance(obj, list):
        raise SchemaError(path, "expected a list of [t, w] pairs")
    atoms = []
    for i, pair in enumerate(obj):
        p = f"{path}[{i}]"
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise SchemaError(p, "expected a [t, w] pair")
        t = _schema_number(pair[0], f"{p}[0]")
        w = _schema_number(pair[1], f"{p}[1]")
        if t < 0.0:
            raise SchemaError(f"{p}[0]", f"atom location must be >= 0, got {t}")
        if w <= 0.0:
            raise SchemaError(f"{p}[1]", f"atom weight must be > 0, got {w}")
        atoms.append((t, w))
    return tuple(atoms)


def parse_spec(doc) -> FunctionSpec:
    """Parse a function-spec document (dict or JSON text) into a validated
    FunctionSpec; schema errors carry the path of the offending field."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"invalid JSON: {exc}") from None
    return _parse_spec_obj(doc, "")


def _parse_spec_obj(obj, path) -> FunctionSpec:
    def at(field):
        return f"{path}.{field}" if path else field

    if not isinstance(obj, dict):
        raise SchemaError(path or "spec", "expected an object")
    kind = obj.get("kind")
    if not isinstance(kind, str):
        raise SchemaError(at("kind"), "missing or non-string kind")

    if "domain" in obj:
        domain = Interval.from_json(obj["domain"], at("domain"))
    else:
        domain = None

    def dom(default=_DEFAULT_DOMAIN):
        return domain if domain is not None else default

    try:
        if kind == "identity":
            return Identity(dom())
        if kind == "power":
            if "p" not in obj:
                raise SchemaError(at("p"), "power requires an exponent p")
            return Power(_schema_number(obj["p"], at("p")), dom())
        if kind == "reciprocal":
            return Reciprocal(dom())
        if kind == "log1p":
            return Log1p(dom())
        if kind == "constant":
            if "c" not in obj:
                raise SchemaError(at("c"), "constant requires a value c")
            c = _schema_number(obj["c"], at("c"))
            if c < 0.0:
                raise SchemaError(at("c"), f"constant must be >= 0, got {c}")
            return Constant(c, dom())
        if kind in ("om_rep", "al_rep"):
            alpha = _schema_number(obj.get("alpha", 0.0), at("alpha"))
            beta = _schema_number(obj.get("beta", 0.0), at("beta"))
            if alpha < 0.0:
                raise SchemaError(at("alpha"), f"alpha must be >= 0, got {alpha}")
            if beta < 0.0:
                raise SchemaError(at("beta"), f"beta must be >= 0, got {beta}")
            atoms = _parse_atoms(obj.get("atoms", []), at("atoms"))
            rep = IntegralRepSpec(alpha, beta, atoms)
            cls = OmRep if kind == "om_rep" else AlRep
            return cls(rep, dom())
        if kind == "table":
            knots = obj.get("knots")
            values = obj.get("values")
            if not isinstance(knots, list) or not isinstance(values, list):
                raise SchemaError(at("knots"), "table requires knots and values lists")
            kn = tuple(_schema_number(v, f"{at('knots')}[{i}]") for i, v in enumerate(knots))
            va = tuple(_schema_number(v, f"{at('values')}[{i}]") for i, v in enumerate(values))
            for i in range(len(kn) - 1):
                if kn[i + 1] <= kn[i]:
                    raise SchemaError(f"{at('knots')}[{i + 1}]",
                                      "knots must be strictly increasing")
            return TableFunction(kn, va, domain)
        if kind == "sum":
            raw_terms = obj.get("terms")
            if not isinstance(raw_terms, list) or not raw_terms:
                raise SchemaError(at("terms"), "sum requires a non-empty terms list")
            terms = []
            for i, term in enumerate(raw_terms):
                p = f"{at('terms')}[{i}]"
                if not isinstance(term, dict):
                    raise SchemaError(p, "expected {weight, spec}")
                w = _schema_number(term.get("weight", 1.0), f"{p}.weight")
                if w < 0.0:
                    raise SchemaError(f"{p}.weight", f"weight must be >= 0, got {w}")
                spec = _parse_spec_obj(term.get("spec"), f"{p}.spec")
                terms.append((w, spec))
            return WeightedSum(tuple(terms), domain)
        if kind in ("sqrt_times", "sqrt_over"):
            inner = _parse_spec_obj(obj.get("inner"), at("inner"))
            return SqrtTransform(inner=inner, times=kind == "sqrt_times", domain=domain)
        if kind == "reciprocal_of":
            inner = _parse_spec_obj(obj.get("inner"), at("inner"))
            return ReciprocalOf(inner=inner, domain=domain)
    except InputError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(path or "spec", str(exc)) from None
    raise SchemaError(at("kind"), f"unknown kind {kind!r}")
