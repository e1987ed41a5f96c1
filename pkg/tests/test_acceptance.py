"""Acceptance battery.

One test per shipped guarantee, each printing a [PASS]/[FAIL] line (run with
``pytest -s tests/test_acceptance.py`` to see them). Tolerances and instance
counts are pinned here; the whole battery finishes in well under a minute
with the compiled kernels.
"""

import json
import time

import numpy as np

from antiloewner import analysis as an
from antiloewner import lyapunov as ly
from antiloewner.builders import Grid, anti_loewner, gram_rank2
from antiloewner.functions import (
    Identity,
    Interval,
    OVER_SQRT,
    TIMES_SQRT,
    al_rep,
    sqrt_transform,
)
from antiloewner.linalg import (
    PsdStatus,
    SymMatrix,
    congruence,
    numerical_rank,
    psd_verdict,
)

SEED = 42
CFG = an.TrialConfig(seed=SEED)


def _report(name: str, ok: bool, detail: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def _ground_truth_functions():
    cat = an.catalog()
    fns = {name: cat[name] for name in
           ("power_0.5", "reciprocal", "log1p", "constant_1")}
    for i in range(20):
        fns[f"al_rep_{i:02d}"] = an.random_al_rep(an._rng(SEED, an._S_RANDOM_FN, i))
    return fns


def test_criterion_01_golden_closed_forms():
    worst_rel = 0.0
    for k in range(50):
        rng = an._rng(SEED, 100, k)
        n = int(rng.integers(2, 11))
        grid = an.sample_grid(rng, CFG.interval, n)
        ones = anti_loewner(Identity(), grid)
        assert np.array_equal(ones.entries, np.ones((n, n)))
        for t in (0.0, 0.5, 1.0, 10.0):
            g = al_rep(atoms=((t, 1.0),))
            k_matrix = anti_loewner(g, grid)
            c_matrix = congruence(gram_rank2(grid, t),
                                  [1.0 / (t + p * p) for p in grid.points])
            rel = float(np.max(np.abs(k_matrix.entries - c_matrix.entries))
                        / np.max(np.abs(k_matrix.entries)))
            worst_rel = max(worst_rel, rel)
            assert rel <= 1e-14, (k, t, rel)
            assert numerical_rank(c_matrix) <= 2
            assert psd_verdict(k_matrix).status is PsdStatus.PSD
    _report("criterion 1: golden closed forms", True,
            f"50 grids x 4 shifts, worst congruence residual {worst_rel:.2e}")


def test_criterion_02_sign_invariance_suite():
    start = time.perf_counter()
    rep = an.prop1_suite(range(2, 9), 100, CFG)
    elapsed = time.perf_counter() - start
    ok = (rep.disagreements == 0
          and rep.marginal_instances < 0.05 * rep.total_instances
          and elapsed <= 30.0)
    _report("criterion 2: determinant sign invariance", ok,
            f"{rep.total_instances} instances, {rep.disagreements} disagreements, "
            f"{rep.marginal_instances} marginal, {elapsed:.1f}s")


def test_criterion_03_factorization_identities():
    rep = an.factorization_suite(range(2, 7), 20, CFG)
    ok = (rep.passed
          and rep.max_elimination_residual <= 1e-12
          and rep.max_schur_residual <= 1e-12
          and rep.max_flip_residual <= 1e-10
          and rep.max_det_residual <= 1e-9)
    _report("criterion 3: elimination factorization", ok,
            f"schur {rep.max_schur_residual:.2e}, flip {rep.max_flip_residual:.2e}, "
            f"det {rep.max_det_residual:.2e}, near-singular skipped "
            f"{rep.near_singular_skipped}/100")


def test_criterion_04_block_pair_equivalence():
    cat = an.catalog()
    names = ("identity", "reciprocal", "power_0.5", "al_rep_a", "al_rep_b",
             "power_2", "power_3")
    details = []
    ok = True
    for name in names:
        rep = an.thm2_suite(cat[name], 200, CFG)
        ok = ok and rep.disagreements == 0
        details.append(f"{name}:{rep.compared}cmp/{rep.marginal_skipped}skip")
    _report("criterion 4: block-pair verdict equivalence", ok, " ".join(details))


def test_criterion_05_sum_difference_identities():
    rep = an.thm1_suite(list(an.catalog().items()), 100, CFG)
    ok = (rep.passed and rep.max_sum_residual <= 1e-11
          and rep.max_diff_residual <= 1e-11)
    _report("criterion 5: sum/difference identities", ok,
            f"max residuals {rep.max_sum_residual:.2e} / {rep.max_diff_residual:.2e}")


def test_criterion_06_classifier_ground_truth():
    cfg = an.TrialConfig(trials=500, seed=SEED)
    fns = _ground_truth_functions()
    for name, fn in fns.items():
        for order in range(2, 7):
            rep = an.classify_anti_loewner(fn, order, cfg)
            assert rep.outcome == an.NO_COUNTEREXAMPLE_FOUND, (name, order)

    cat = an.catalog()
    witness_ok = True
    for name in ("power_2", "power_3"):
        rep = an.classify_anti_loewner(cat[name], 2, cfg)
        assert rep.outcome == an.REFUTED, name
        assert rep.trials_run <= 500
        # witness survives a serialization round trip and re-verifies
        doc = json.loads(json.dumps(rep.to_json()))
        matrix = SymMatrix.from_json(doc["witness"]["matrix"])
        reloaded = psd_verdict(matrix, cfg.tolerance)
        witness_ok = witness_ok and reloaded.status is PsdStatus.NOT_PSD
        grid = Grid.from_json(doc["witness"]["grid"])
        rebuilt = anti_loewner(cat[name], grid)
        witness_ok = witness_ok and np.array_equal(rebuilt.entries, matrix.entries)
    _report("criterion 6: classifier ground truth", witness_ok,
            f"{len(fns)} positive functions at orders 2-6, refuters re-verified")


def test_criterion_07_forward_implication():
    cfg_sq = an.TrialConfig(trials=500, seed=SEED, interval=Interval(0.0, 100.0))
    fns = _ground_truth_functions()
    for name, g in fns.items():
        r1 = an.classify_matrix_monotone(
            sqrt_transform(g, TIMES_SQRT), 3, an.INCREASING, cfg_sq)
        r2 = an.classify_matrix_monotone(
            sqrt_transform(g, OVER_SQRT), 3, an.DECREASING, cfg_sq)
        assert r1.outcome == an.NO_COUNTEREXAMPLE_FOUND, (name, "times_sqrt")
        assert r2.outcome == an.NO_COUNTEREXAMPLE_FOUND, (name, "over_sqrt")
    _report("criterion 7: forward implication through the transforms", True,
            f"{len(fns)} functions x 2 transforms at order 3")


def test_criterion_08_lyapunov():
    # diagonal fast path is bit-for-bit the divided-sum builder
    points = (0.7, 1.9, 3.1, 6.4)
    g = al_rep(alpha=0.5, beta=0.25, atoms=((2.0, 3.0),))
    x = ly.solve(ly.LyapunovProblem(
        SymMatrix(np.diag(points)), SymMatrix(np.ones((4, 4))), g))
    bitwise = np.array_equal(
        x.entries, anti_loewner(g, Grid(points, Interval(0.0, float("inf")))).entries)

    worst = 0.0
    for k in range(100):
        rng = an._rng(SEED, 101, k)
        n = int(rng.integers(2, 17))
        w = rng.standard_normal((n, n))
        sym = 0.5 * (w + w.T)
        shift = abs(float(np.linalg.eigvalsh(sym)[0])) + float(rng.uniform(0.5, 3.0))
        a = SymMatrix(sym + shift * np.eye(n))
        wb = rng.standard_normal((n, n))
        b = SymMatrix(0.5 * (wb + wb.T))
        p = ly.LyapunovProblem(a, b, g)
        worst = max(worst, ly.equation_residual(p, ly.solve(p)))

    from antiloewner.functions import Power
    cert = ly.certify(ly.LyapunovProblem(
        SymMatrix(np.diag([1.0, 3.0])), SymMatrix(np.ones((2, 2))), Power(2.0)))
    ok = bitwise and worst <= 1e-10 and cert.verdict.status is PsdStatus.NOT_PSD
    _report("criterion 8: Lyapunov solver", ok,
            f"bitwise diagonal path {bitwise}, worst residual {worst:.2e}, "
            f"power-2 instance NOT_PSD")


def test_criterion_09_continuity_bound():
    worst = 0.0
    for name, fn in an.anti_loewner_catalog().items():
        rep = an.continuity_suite(fn, 100, CFG)
        assert rep.passed, name
        assert rep.max_det_residual <= 1e-12
        worst = max(worst, rep.max_det_residual)
    _report("criterion 9: continuity bound", True,
            f"100 pairs per function, worst det residual {worst:.2e}")


def test_criterion_10_determinism():
    first = json.dumps(an.full_battery(seed=SEED), sort_keys=True)
    second = json.dumps(an.full_battery(seed=SEED), sort_keys=True)
    ok = first == second and json.loads(first)["passed"]
    _report("criterion 10: seeded determinism", ok,
            f"two battery runs, {len(first)} bytes each, byte-identical")
