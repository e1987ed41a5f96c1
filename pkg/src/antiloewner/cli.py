"""Command-line entry point.

Subcommands expose the builders (``build``), the positivity-order classifier
(``classify``), the verification suites (``verify``), and the Lyapunov-type
solver (``lyapunov``). Every report embeds a run manifest (command,
canonicalized inputs, seed, tool version, timestamp); re-running the same
manifest reproduces the results exactly, timestamps aside.

Exit codes: 0 success / suite passed, 1 mathematical refutation or suite
failure, 2 malformed input. Shell pipelines can therefore distinguish "the
math said no" from "the input was wrong".
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from datetime import datetime, timezone
from pathlib import Path

import antiloewner
from antiloewner import analysis, builders, functions, linalg, lyapunov
from antiloewner.errors import AntiLoewnerError, InputError, SchemaError

_TOL_ENV = "ALW_DEFAULT_TOL"


def _default_tolerance() -> float:
    raw = os.environ.get(_TOL_ENV)
    if raw is None:
        return linalg.DEFAULT_PSD_TOLERANCE
    try:
        value = float(raw)
    except ValueError:
        raise InputError(f"{_TOL_ENV} must be a number, got {raw!r}") from None
    if value <= 0.0:
        raise InputError(f"{_TOL_ENV} must be positive, got {value}")
    return value


# ---------------------------------------------------------------------------
# Input parsing helpers

_SHORTHANDS = {"identity", "reciprocal", "log1p"}
_ATOMS_RE = re.compile(r"\(([^()]*)\)")


def parse_fn_argument(text: str) -> functions.FunctionSpec:
    """Accept a JSON document, a path to one, or the compact shorthand
    (``identity``, ``power:0.5``, ``al_rep:alpha=0,beta=1,atoms=(1,0.5)(3,2)``)."""
    text = text.strip()
    if text.startswith("{"):
        return functions.parse_spec(text)
    path = Path(text)
    if path.suffix == ".json" or path.exists():
        try:
            return functions.parse_spec(path.read_text())
        except OSError as exc:
            raise InputError(f"cannot read function spec file {text!r}: {exc}") from None
    return functions.parse_spec(_shorthand_to_document(text))


def _shorthand_to_document(text: str) -> dict:
    name, _, params = text.partition(":")
    name = name.strip().lower()
    if name in _SHORTHANDS:
        if params:
            raise SchemaError("fn", f"{name} takes no parameters")
        return {"kind": name}
    if name == "power":
        return {"kind": "power", "p": _shorthand_number(params, "power exponent")}
    if name == "constant":
        return {"kind": "constant", "c": _shorthand_number(params, "constant value")}
    if name in ("al_rep", "om_rep"):
        doc: dict = {"kind": name}
        for part in _split_shorthand_params(params):
            key, _, raw = part.partition("=")
            key = key.strip()
            if key in ("alpha", "beta"):
                doc[key] = _shorthand_number(raw, key)
            elif key == "atoms":
                atoms = []
                for chunk in _ATOMS_RE.findall(raw):
                    pair = [p for p in chunk.split(",") if p.strip()]
                    if len(pair) != 2:
                        raise SchemaError("fn.atoms", f"expected (t,w), got ({chunk})")
                    atoms.append([_shorthand_number(pair[0], "atom t"),
                                  _shorthand_number(pair[1], "atom w")])
                doc["atoms"] = atoms
            else:
                raise SchemaError("fn", f"unknown parameter {key!r} for {name}")
        return doc
    raise SchemaError("fn", f"unknown function shorthand {name!r}")


def _split_shorthand_params(params: str) -> list[str]:
    # Split on commas that are not inside (t,w) atom pairs.
    parts, depth, current = [], 0, []
    for ch in params:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if current:
        parts.append("".join(current))
    return [p for p in (p.strip() for p in parts) if p]


def _shorthand_number(raw: str, what: str) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise SchemaError("fn", f"invalid {what}: {raw!r}") from None


def parse_interval_argument(text: str | None) -> functions.Interval:
    if text is None:
        return functions.Interval(0.0, math.inf)
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise InputError(f"interval must be 'a,b', got {text!r}")
    a = float(parts[0])
    b = math.inf if parts[1] in ("inf", "Inf", "INF") else float(parts[1])
    return functions.Interval(a, b)


def parse_grid_argument(text: str, interval: str | None) -> builders.Grid:
    """Inline comma-separated points, or a JSON/CSV grid file path."""
    path = Path(text)
    if path.exists() and not _looks_like_inline_points(text):
        grid = builders.load_grid(path)
        if interval is not None:
            grid = builders.Grid(grid.points, parse_interval_argument(interval))
        return grid
    try:
        points = tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise InputError(f"cannot parse grid {text!r}: expected numbers or a file") from None
    if not points:
        raise InputError("grid is empty")
    return builders.Grid(points, parse_interval_argument(interval))


def _looks_like_inline_points(text: str) -> bool:
    try:
        [float(p) for p in text.split(",") if p.strip()]
        return True
    except ValueError:
        return False


def parse_signs_argument(text: str) -> builders.SignVector:
    cleaned = text.replace(",", "")
    signs = []
    for ch in cleaned:
        if ch == "+":
            signs.append(1)
        elif ch == "-":
            signs.append(-1)
        elif not ch.isspace():
            raise InputError(f"signs must be '+' or '-', got {ch!r}")
    return builders.SignVector(tuple(signs))


# ---------------------------------------------------------------------------
# Manifest and report output


def make_manifest(command: str, inputs: dict, seed: int | None) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "tool_version": antiloewner.__version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _flatten(obj, prefix=""):
    rows = []
    if isinstance(obj, dict):
        for key in obj:
            rows.extend(_flatten(obj[key], f"{prefix}{key}." if prefix else f"{key}."))
    elif isinstance(obj, (list, tuple)):
        rows.append((prefix.rstrip("."), json.dumps(obj)))
    else:
        rows.append((prefix.rstrip("."), obj))
    return rows


def emit_report(args, manifest: dict, report: dict) -> None:
    if args.format == "csv":
        lines = [f"# manifest: {json.dumps(manifest, sort_keys=True)}"]
        matrices = {k: v for k, v in report.items()
                    if isinstance(v, dict) and "entries" in v}
        scalars = {k: v for k, v in report.items() if k not in matrices}
        for key, value in _flatten(scalars):
            lines.append(f"{key},{value}")
        for name, m in matrices.items():
            lines.append(f"# matrix: {name}")
            for row in m["entries"]:
                lines.append(",".join(repr(v) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"manifest": manifest, "report": report},
                          sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _matrix_report(m: linalg.SymMatrix, tolerance: float) -> dict:
    verdict = linalg.psd_verdict(m, tolerance)
    return {
        "dim": m.dim,
        "entries": m.to_json()["entries"],
        "eigenvalues": [float(v) for v in linalg.eigenvalues(m)],
        "verdict": verdict.to_json(),
        "rank": linalg.numerical_rank(m),
    }


# ---------------------------------------------------------------------------
# Subcommand handlers


def cmd_build(args) -> int:
    fn = parse_fn_argument(args.fn)
    grid = parse_grid_argument(args.grid, args.interval)
    tolerance = args.tolerance
    inputs = {
        "kind": args.kind,
        "fn": fn.to_json(),
        "grid": grid.to_json(),
        "tolerance": tolerance,
    }
    if args.kind == "loewner":
        report = {"matrix": _matrix_report(builders.loewner(fn, grid), tolerance)}
    elif args.kind == "antiloewner":
        report = {"matrix": _matrix_report(builders.anti_loewner(fn, grid), tolerance)}
    elif args.kind == "signed":
        if not args.signs:
            raise InputError("build signed requires --signs")
        signs = parse_signs_argument(args.signs)
        inputs["signs"] = list(signs.signs)
        report = {"matrix": _matrix_report(
            builders.signed_matrix(fn, grid, signs), tolerance)}
    else:  # thm2
        eps = args.epsilon if args.epsilon is not None else builders.default_epsilon(grid)
        inputs["epsilon"] = eps
        kp, kd = builders.theorem2_blocks(fn, grid, builders.Theorem2Config(eps))
        report = {
            "k_prime": _matrix_report(kp, tolerance),
            "k_double_prime": _matrix_report(kd, tolerance),
        }
    manifest = make_manifest(f"build {args.kind}", inputs, seed=None)
    emit_report(args, manifest, report)
    return 0


_PROPERTIES = {
    "anti-loewner": analysis.ANTI_LOEWNER,
    "monotone": analysis.MATRIX_MONOTONE,
    "monotone-decreasing": analysis.MATRIX_MONOTONE_DECREASING,
}


def cmd_classify(args) -> int:
    fn = parse_fn_argument(args.fn)
    if args.order < 1:
        raise InputError("--order must be at least 1")
    cfg = analysis.TrialConfig(
        trials=args.trials, seed=args.seed, tolerance=args.tolerance,
        interval=parse_interval_argument(args.interval or "0,10"),
    )
    prop = _PROPERTIES[args.property]
    if prop == analysis.ANTI_LOEWNER:
        report = analysis.classify_anti_loewner(fn, args.order, cfg)
    elif prop == analysis.MATRIX_MONOTONE:
        report = analysis.classify_matrix_monotone(fn, args.order, analysis.INCREASING, cfg)
    else:
        report = analysis.classify_matrix_monotone(fn, args.order, analysis.DECREASING, cfg)
    inputs = {
        "fn": fn.to_json(), "property": args.property, "order": args.order,
        "trials": args.trials, "tolerance": args.tolerance,
        "interval": cfg.interval.to_json(),
    }
    manifest = make_manifest("classify", inputs, seed=args.seed)
    emit_report(args, manifest, report.to_json())
    if report.refuted and report.witness is not None:
        witness_path = (Path(args.out).with_suffix(".witness.json")
                        if args.out else Path("witness.json"))
        witness_path.write_text(json.dumps(
            {"manifest": manifest, "witness": report.witness.to_json()},
            sort_keys=True, indent=2) + "\n")
        print(f"witness written to {witness_path}", file=sys.stderr)
    return 1 if report.refuted else 0


def cmd_verify(args) -> int:
    seed = args.seed
    tolerance = args.tolerance
    interval = parse_interval_argument(args.interval or "0,10")
    trials = args.trials

    if args.suite == "prop1":
        if args.n is None:
            raise InputError("verify prop1 requires --n")
        cfg = analysis.TrialConfig(seed=seed, tolerance=tolerance, interval=interval)
        if args.n > cfg.max_order and not args.sampled:
            raise InputError(
                f"--n {args.n} exceeds the exhaustive enumeration cap "
                f"{cfg.max_order}; pass --sampled to use sampled sign vectors"
            )
        report = analysis.prop1_suite([args.n], trials, cfg, sampled=args.sampled)
        inputs = {"n": args.n, "instances": trials, "sampled": args.sampled,
                  "tolerance": tolerance, "interval": interval.to_json()}
        payload = report.to_json()
        passed = report.passed
    elif args.suite == "prop1-factor":
        if args.n is None:
            raise InputError("verify prop1-factor requires --n")
        cfg = analysis.TrialConfig(seed=seed, tolerance=tolerance, interval=interval)
        report = analysis.factorization_suite([args.n], trials, cfg)
        inputs = {"n": args.n, "instances": trials,
                  "tolerance": tolerance, "interval": interval.to_json()}
        payload = report.to_json()
        passed = report.passed
    elif args.suite == "thm1":
        if not args.fn:
            raise InputError("verify thm1 requires --fn")
        fn = parse_fn_argument(args.fn)
        cfg = analysis.TrialConfig(seed=seed, tolerance=tolerance, interval=interval)
        report = analysis.thm1_suite([("fn", fn)], trials, cfg)
        inputs = {"fn": fn.to_json(), "grids": trials,
                  "tolerance": tolerance, "interval": interval.to_json()}
        payload = report.to_json()
        payload["residual_max"] = max(report.max_sum_residual, report.max_diff_residual)
        passed = report.passed
    elif args.suite == "thm2":
        if not args.fn:
            raise InputError("verify thm2 requires --fn")
        fn = parse_fn_argument(args.fn)
        cfg = analysis.TrialConfig(seed=seed, tolerance=tolerance, interval=interval)
        report = analysis.thm2_suite(fn, trials, cfg)
        inputs = {"fn": fn.to_json(), "instances": trials,
                  "tolerance": tolerance, "interval": interval.to_json()}
        payload = report.to_json()
        passed = report.passed
    elif args.suite == "continuity":
        if not args.fn:
            raise InputError("verify continuity requires --fn")
        fn = parse_fn_argument(args.fn)
        cfg = analysis.TrialConfig(seed=seed, tolerance=tolerance, interval=interval)
        report = analysis.continuity_suite(fn, trials, cfg)
        inputs = {"fn": fn.to_json(), "pairs": trials,
                  "tolerance": tolerance, "interval": interval.to_json()}
        payload = {
            "pairs": len(report.rows),
            "max_det_residual": report.max_det_residual,
            "passed": report.passed,
        }
        passed = report.passed
    else:  # all
        payload = analysis.full_battery(seed)
        inputs = {"battery": "full"}
        passed = payload["passed"]

    manifest = make_manifest(f"verify {args.suite}", inputs, seed=seed)
    emit_report(args, manifest, payload)
    return 0 if passed else 1


def cmd_lyapunov(args) -> int:
    problem = lyapunov.load_problem(args.problem)
    cert = lyapunov.certify(problem, tolerance=args.tolerance, strict_pd=args.strict_pd)
    inputs = {
        "problem": str(args.problem),
        "tolerance": args.tolerance,
        "certify": args.certify,
        "strict_pd": args.strict_pd,
    }
    manifest = make_manifest("lyapunov", inputs, seed=None)
    report = {
        "solution": cert.solution.to_json(),
        "residual": cert.residual,
        "verdict": cert.verdict.to_json(),
    }
    if cert.strictly_definite is not None:
        report["strictly_definite"] = cert.strictly_definite
    emit_report(args, manifest, report)
    if args.strict_pd:
        return 0 if cert.strictly_definite else 1
    if args.certify:
        return 0 if cert.verdict.status is linalg.PsdStatus.PSD else 1
    return 0


# ---------------------------------------------------------------------------
# Parser


def _add_common_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alw",
        description="Loewner / anti-Loewner matrix toolkit: builders, "
                    "positivity-order classification, verification suites, "
                    "and a Lyapunov-type solver.",
    )
    parser.add_argument("--version", action="version", version=antiloewner.__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    tol = _default_tolerance()

    b = sub.add_parser("build", help="construct a matrix family and report on it")
    b.add_argument("kind", choices=("loewner", "antiloewner", "signed", "thm2"))
    b.add_argument("--fn", required=True, help="function spec (JSON, file, or shorthand)")
    b.add_argument("--grid", required=True, help="comma-separated points or a grid file")
    b.add_argument("--interval", help="grid interval as 'a,b' (b may be inf)")
    b.add_argument("--signs", help="sign vector such as '+,-,+' (signed builds)")
    b.add_argument("--epsilon", type=float, help="shift for thm2 block pairs")
    b.add_argument("--tolerance", type=float, default=tol)
    _add_common_output(b)
    b.set_defaults(handler=cmd_build)

    c = sub.add_parser("classify", help="randomized positivity-order classification")
    c.add_argument("--fn", required=True)
    c.add_argument("--property", choices=sorted(_PROPERTIES), default="anti-loewner")
    c.add_argument("--order", "--n", dest="order", type=int, required=True)
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tolerance", type=float, default=tol)
    c.add_argument("--interval", help="sampling interval, default 0,10")
    _add_common_output(c)
    c.set_defaults(handler=cmd_classify)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=("prop1", "prop1-factor", "thm1", "thm2",
                                     "continuity", "all"))
    v.add_argument("--fn", help="function spec for thm1/thm2/continuity")
    v.add_argument("--n", "--order", dest="n", type=int,
                   help="matrix order for prop1 / prop1-factor")
    v.add_argument("--trials", type=int, default=100,
                   help="instances / grids / pairs per suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tolerance", type=float, default=tol)
    v.add_argument("--interval", help="sampling interval, default 0,10")
    v.add_argument("--sampled", action="store_true",
                   help="allow sampled sign vectors beyond the exhaustive cap")
    _add_common_output(v)
    v.set_defaults(handler=cmd_verify)

    ly = sub.add_parser("lyapunov", help="solve AX + XA = g(A)B + Bg(A)")
    ly.add_argument("problem", help="problem file: JSON with A, B, g")
    ly.add_argument("--certify", action="store_true",
                    help="exit 1 unless the solution is PSD")
    ly.add_argument("--strict-pd", action="store_true",
                    help="exit 1 unless the solution is PD with margin")
    ly.add_argument("--tolerance", type=float, default=tol)
    _add_common_output(ly)
    ly.set_defaults(handler=cmd_lyapunov)

    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.handler(args)
    except AntiLoewnerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
