"""Matrix family constructors: golden values, exact symmetry, the signed
family, block pairs, and grids."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antiloewner.errors import ConstructionError, InputError
from antiloewner.builders import (
    Grid,
    SignVector,
    Theorem2Config,
    anti_loewner,
    default_epsilon,
    extended_grid,
    gram_rank2,
    load_grid,
    loewner,
    signed_matrix,
    signed_matrix_from_values,
    theorem2_blocks,
)
from antiloewner.functions import (
    Identity,
    Interval,
    Power,
    Reciprocal,
    al_rep,
    evaluate,
    reciprocal_of,
)
from antiloewner.linalg import PsdStatus, congruence, numerical_rank, psd_verdict

POS = Interval(0.0, math.inf)


class TestGrid:
    def test_basic(self):
        g = Grid((1.0, 2.0, 3.5), POS)
        assert g.size == 3
        assert g.min_gap == 1.0

    def test_points_must_be_inside(self):
        with pytest.raises(InputError):
            Grid((0.0, 1.0), POS)
        with pytest.raises(InputError):
            Grid((1.0, 5.0), Interval(0.0, 5.0))

    def test_near_coincident_rejected(self):
        with pytest.raises(InputError):
            Grid((1.0, 1.0 + 1e-12), POS)
        with pytest.raises(InputError):
            Grid((2.0, 2.0), POS)

    def test_json_round_trip(self):
        g = Grid((1.0, 4.0), Interval(0.5, 10.0))
        assert Grid.from_json(json.loads(json.dumps(g.to_json()))) == g

    def test_load_csv_and_json(self, tmp_path):
        csv_path = tmp_path / "grid.csv"
        csv_path.write_text("1.0\n2.0\n3.0\n")
        g = load_grid(csv_path)
        assert g.points == (1.0, 2.0, 3.0)
        json_path = tmp_path / "grid.json"
        json_path.write_text('{"points": [1, 2], "interval": [0, 10]}')
        g2 = load_grid(json_path)
        assert g2.points == (1.0, 2.0) and g2.interval == Interval(0.0, 10.0)

    def test_squared(self):
        g = Grid((1.0, 2.0), Interval(0.5, 4.0))
        assert g.squared() == Grid((1.0, 4.0), Interval(0.25, 16.0))


class TestSignVector:
    def test_validation(self):
        with pytest.raises(InputError):
            SignVector((1, 0))
        with pytest.raises(InputError):
            SignVector(())

    def test_helpers(self):
        s = SignVector.all_plus(3)
        assert s.signs == (1, 1, 1)
        assert s.flipped().signs == (-1, -1, -1)


class TestLoewner:
    def test_identity_gives_all_ones(self):
        m = loewner(Identity(), Grid((0.5, 1.5, 4.0), POS))
        assert np.array_equal(m.entries, np.ones((3, 3)))

    def test_power_two_gives_sum_matrix(self):
        grid = Grid((1.0, 2.0, 5.0), POS)
        m = loewner(Power(2.0), grid)
        x = np.array(grid.points)
        assert np.allclose(m.entries, np.add.outer(x, x), rtol=0, atol=1e-15)

    def test_power_half_golden(self):
        m = loewner(Power(0.5), Grid((1.0, 4.0), POS))
        assert np.array_equal(m.entries, [[0.5, 1.0 / 3.0], [1.0 / 3.0, 0.25]])


class TestAntiLoewner:
    def test_identity_all_ones(self):
        m = anti_loewner(Identity(), Grid((1.0, 2.0, 3.0), POS))
        assert np.array_equal(m.entries, np.ones((3, 3)))

    def test_reciprocal_rank_one(self):
        grid = Grid((0.5, 1.0, 2.0, 4.0), POS)
        m = anti_loewner(Reciprocal(), grid)
        x = np.array(grid.points)
        assert np.allclose(m.entries, 1.0 / np.outer(x, x), rtol=1e-15)
        assert numerical_rank(m) == 1
        assert psd_verdict(m).status is PsdStatus.PSD

    def test_power_two_golden(self):
        m = anti_loewner(Power(2.0), Grid((1.0, 3.0), POS))
        assert np.array_equal(m.entries, [[1.0, 2.5], [2.5, 3.0]])

    def test_diagonal_is_g_over_x(self):
        g = al_rep(alpha=1.0, beta=2.0, atoms=((1.0, 1.0),))
        grid = Grid((0.7, 1.9, 3.1), POS)
        m = anti_loewner(g, grid)
        for i, p in enumerate(grid.points):
            assert m.entries[i, i] == evaluate(g, p) / p

    def test_reciprocal_closure_congruence(self):
        # K_g == D K_{1/g} D with D = diag(g(x_i))
        g = al_rep(alpha=0.5, beta=0.25, atoms=((0.0, 1.0), (2.0, 3.0)))
        grid = Grid((0.3, 1.1, 2.4, 6.5), POS)
        kg = anti_loewner(g, grid)
        k_inv = anti_loewner(reciprocal_of(g), grid)
        weights = [evaluate(g, p) for p in grid.points]
        back = congruence(k_inv, weights)
        rel = np.max(np.abs(kg.entries - back.entries)) / np.max(np.abs(kg.entries))
        assert rel <= 1e-12


class TestSignedMatrix:
    def test_all_plus_reproduces_anti_loewner_exactly(self):
        g = Power(0.5)
        grid = Grid((0.5, 1.5, 2.5, 7.0), POS)
        z = signed_matrix(g, grid, SignVector.all_plus(4))
        assert np.array_equal(z.entries, anti_loewner(g, grid).entries)

    def test_single_point_sign_cancels(self):
        g = Power(2.0)
        grid = Grid((2.0,), POS)
        for s in (1, -1):
            z = signed_matrix(g, grid, SignVector((s,)))
            assert np.array_equal(z.entries, [[2.0]])

    def test_two_point_determinant_closed_form(self):
        x = np.array([1.3, 2.7])
        g = np.array([0.9, 3.1])
        numerator = g[0] * g[1] * (x[0] ** 2 + x[1] ** 2) - x[0] * x[1] * (g[0] ** 2 + g[1] ** 2)
        for s in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            z = signed_matrix_from_values(x, g, SignVector(s))
            det = z.entries[0, 0] * z.entries[1, 1] - z.entries[0, 1] ** 2
            expected = numerator / (x[0] * x[1] * (s[0] * x[0] + s[1] * x[1]) ** 2)
            assert det == pytest.approx(expected, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            signed_matrix(Identity(), Grid((1.0, 2.0), POS), SignVector((1, -1, 1)))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 7), st.integers(0, 10_000))
    def test_global_flip_gives_identical_matrix(self, n, seed):
        rng = np.random.default_rng(seed)
        x = np.sort(rng.uniform(0.1, 10.0, n))
        if n > 1 and np.min(np.diff(x)) < 1e-6:
            return
        g = rng.uniform(0.1, 10.0, n)
        s = SignVector(tuple(int(v) for v in rng.choice((1, -1), n)))
        z1 = signed_matrix_from_values(x, g, s)
        z2 = signed_matrix_from_values(x, g, s.flipped())
        assert np.array_equal(z1.entries, z2.entries)


class TestTheorem2Blocks:
    def test_identity_n1(self):
        kp, kd = theorem2_blocks(Identity(), Grid((1.0,), POS), Theorem2Config(0.25))
        assert np.array_equal(kp.entries, np.ones((2, 2)))
        assert np.array_equal(kd.entries, np.ones((2, 2)))

    def test_power_two_n1_golden(self):
        kp, kd = theorem2_blocks(Power(2.0), Grid((1.0,), POS), Theorem2Config(0.5))
        assert np.allclose(kp.entries, [[1.0, 1.3], [1.3, 1.5]], atol=1e-15)
        assert np.allclose(kd.entries, [[1.0, 2.5], [2.5, 1.5]], atol=1e-15)

    def test_upper_left_blocks_coincide(self):
        g = al_rep(beta=1.0, atoms=((1.0, 2.0),))
        grid = Grid((0.8, 1.6, 2.9), POS)
        kp, kd = theorem2_blocks(g, grid, Theorem2Config(0.05))
        assert np.array_equal(kp.entries[:3, :3], kd.entries[:3, :3])

    def test_k_prime_is_anti_loewner_on_extended_grid(self):
        g = Power(0.5)
        grid = Grid((1.0, 2.0, 4.0), POS)
        cfg = Theorem2Config(0.125)
        kp, _ = theorem2_blocks(g, grid, cfg)
        ext = extended_grid(grid, cfg)
        assert ext.points == (1.0, 2.0, 4.0, 1.125, 2.125, 4.125)
        assert np.array_equal(kp.entries, anti_loewner(g, ext).entries)

    def test_blocks_match_shifted_formulas_entrywise(self):
        g = al_rep(alpha=0.5, beta=0.25, atoms=((2.0, 3.0),))
        y = (0.9, 1.7, 3.3)
        eps = 0.07
        kp, kd = theorem2_blocks(g, Grid(y, POS), Theorem2Config(eps))
        n = len(y)
        for k in range(n):
            for l in range(n):
                for bi in (0, 1):
                    for bj in (0, 1):
                        u = y[k] + bi * eps
                        v = y[l] + bj * eps
                        kv = (evaluate(g, u) + evaluate(g, v)) / (u + v)
                        assert kp.entries[k + bi * n, l + bj * n] == pytest.approx(kv, rel=1e-13)
                        if bi == bj:
                            expect = kv
                        else:
                            expect = (evaluate(g, u) - evaluate(g, v)) / (u - v)
                        assert kd.entries[k + bi * n, l + bj * n] == pytest.approx(expect, rel=1e-13)

    def test_epsilon_too_large_names_offending_pair(self):
        grid = Grid((1.0, 1.2, 5.0), POS)
        with pytest.raises(InputError) as err:
            theorem2_blocks(Identity(), grid, Theorem2Config(0.2))
        assert "1.0" in str(err.value) and "1.2" in str(err.value)

    def test_epsilon_leaving_interval_rejected(self):
        grid = Grid((1.0, 2.0), Interval(0.0, 2.25))
        with pytest.raises(InputError):
            theorem2_blocks(Identity(), grid, Theorem2Config(0.4))

    def test_default_epsilon_respects_both_limits(self):
        grid = Grid((1.0, 2.0), Interval(0.0, 2.5))
        eps = default_epsilon(grid)
        assert eps == min(1.0 / 4.0, 0.5 / 2.0)
        theorem2_blocks(Identity(), grid, Theorem2Config(eps))


class TestGramRank2:
    def test_t_zero_outer_product(self):
        m = gram_rank2(Grid((1.0, 2.0), POS), 0.0)
        assert np.array_equal(m.entries, [[1.0, 2.0], [2.0, 4.0]])
        assert numerical_rank(m) == 1

    def test_rank_two_psd(self):
        m = gram_rank2(Grid((1.0, 2.0, 3.0), POS), 1.0)
        assert numerical_rank(m) == 2
        assert psd_verdict(m).status is PsdStatus.PSD

    def test_congruence_matches_extremal_divided_sum(self):
        for t in (0.0, 0.5, 1.0, 10.0):
            grid = Grid((0.4, 1.3, 2.2, 5.1), POS)
            g = al_rep(atoms=((t, 1.0),))
            k = anti_loewner(g, grid)
            c = congruence(gram_rank2(grid, t), [1.0 / (t + p * p) for p in grid.points])
            rel = np.max(np.abs(k.entries - c.entries)) / np.max(np.abs(k.entries))
            assert rel <= 1e-14

    def test_negative_t_rejected(self):
        with pytest.raises(InputError):
            gram_rank2(Grid((1.0,), POS), -1.0)


def test_loewner_needs_a_derivative():
    from dataclasses import dataclass
    from antiloewner.functions import FunctionSpec

    @dataclass(frozen=True)
    class ValuesOnly(FunctionSpec):
        domain: Interval = Interval(0.0, math.inf)
        kind = "values_only"

        def value(self, x):
            return x

        def to_json(self):
            return {"kind": "values_only"}

    with pytest.raises(ConstructionError):
        loewner(ValuesOnly(), Grid((1.0, 2.0), POS))


def test_anti_loewner_requires_positive_points():
    # a grid on an interval reaching below zero cannot exist here, but the
    # divided-sum builders double-check positivity themselves
    grid = Grid((1.0, 2.0), POS)
    object.__setattr__(grid, "points", (-1.0, 2.0))
    with pytest.raises(ConstructionError):
        anti_loewner(Identity(), grid)
