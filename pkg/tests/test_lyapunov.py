"""Lyapunov-type solver and the spectral functional calculus."""

import json
import math

import numpy as np
import pytest

from antiloewner.errors import DomainError, InputError
from antiloewner.builders import Grid, anti_loewner
from antiloewner.functions import Constant, Identity, Interval, Power, al_rep
from antiloewner.linalg import PsdStatus, SymMatrix
from antiloewner.lyapunov import (
    LyapunovProblem,
    certify,
    equation_residual,
    load_problem,
    matrix_function,
    solve,
)

POS = Interval(0.0, math.inf)


def diag(*values):
    return SymMatrix(np.diag(values))


class TestSolveDiagonal:
    def test_identity_function_identity_b(self):
        p = LyapunovProblem(diag(1.0, 2.0), SymMatrix(np.eye(2)), Identity())
        x = solve(p)
        assert np.array_equal(x.entries, np.eye(2))

    def test_all_ones_b_reproduces_divided_sum_builder_bitwise(self):
        points = (0.7, 1.9, 3.1, 6.4)
        g = al_rep(alpha=0.5, beta=0.25, atoms=((2.0, 3.0),))
        a = SymMatrix(np.diag(points))
        b = SymMatrix(np.ones((4, 4)))
        x = solve(LyapunovProblem(a, b, g))
        k = anti_loewner(g, Grid(points, POS))
        assert np.array_equal(x.entries, k.entries)

    def test_power_two_on_diag_1_3_not_psd(self):
        p = LyapunovProblem(diag(1.0, 3.0), SymMatrix(np.ones((2, 2))), Power(2.0))
        cert = certify(p)
        assert np.array_equal(cert.solution.entries, [[1.0, 2.5], [2.5, 3.0]])
        assert cert.verdict.status is PsdStatus.NOT_PSD

    def test_repeated_eigenvalues_are_fine(self):
        p = LyapunovProblem(diag(2.0, 2.0), SymMatrix(np.ones((2, 2))), Power(0.5))
        x = solve(p)
        expected = math.sqrt(2.0) / 2.0
        assert np.allclose(x.entries, expected)


class TestSolveGeneral:
    def _random_problem(self, rng, n, g=None):
        w = rng.standard_normal((n, n))
        a0 = 0.5 * (w + w.T)
        shift = abs(float(np.linalg.eigvalsh(a0)[0])) + float(rng.uniform(0.5, 2.0))
        a = SymMatrix(a0 + shift * np.eye(n))
        wb = rng.standard_normal((n, n))
        b = SymMatrix(0.5 * (wb + wb.T))
        return LyapunovProblem(a, b, g or al_rep(beta=0.5, atoms=((1.0, 1.0),)))

    def test_residual_bound_random_instances(self):
        rng = np.random.default_rng(1)
        worst = 0.0
        for _ in range(100):
            n = int(rng.integers(2, 17))
            p = self._random_problem(rng, n)
            worst = max(worst, equation_residual(p, solve(p)))
        assert worst <= 1e-10

    def test_basis_invariance(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            n = int(rng.integers(2, 9))
            p = self._random_problem(rng, n)
            q, _ = np.linalg.qr(rng.standard_normal((n, n)))
            a2 = SymMatrix.from_array(q @ p.A.entries @ q.T, tolerance=1e-9)
            b2 = SymMatrix.from_array(q @ p.B.entries @ q.T, tolerance=1e-9)
            x1 = solve(p)
            x2 = solve(LyapunovProblem(a2, b2, p.g))
            expected = q @ x1.entries @ q.T
            scale = max(1.0, float(np.max(np.abs(expected))))
            assert np.max(np.abs(x2.entries - expected)) <= 1e-9 * scale

    def test_psd_b_gives_psd_solution_for_al_rep(self):
        rng = np.random.default_rng(3)
        g = al_rep(alpha=0.2, beta=1.0, atoms=((0.5, 2.0),))
        for _ in range(20):
            n = int(rng.integers(2, 9))
            w = rng.standard_normal((n, n))
            a = SymMatrix(0.5 * (w + w.T) + (abs(float(np.linalg.eigvalsh(0.5 * (w + w.T))[0])) + 1.0) * np.eye(n))
            wb = rng.standard_normal((n, n))
            bb = wb.T @ wb
            b = SymMatrix(0.5 * (bb + bb.T))
            cert = certify(LyapunovProblem(a, b, g))
            assert cert.verdict.status is PsdStatus.PSD
            assert cert.residual <= 1e-10

    def test_non_pd_a_rejected(self):
        a = SymMatrix([[1.0, 0.0], [0.0, -1.0]])
        with pytest.raises(InputError):
            solve(LyapunovProblem(a, SymMatrix(np.eye(2)), Identity()))

    def test_eigenvalue_outside_domain_named(self):
        a = diag(1.0, 5.0)
        g = Power(0.5, Interval(0.0, 2.0))
        with pytest.raises(DomainError) as err:
            solve(LyapunovProblem(a, SymMatrix(np.eye(2)), g))
        assert "5.0" in str(err.value)

    def test_dim_mismatch(self):
        with pytest.raises(InputError):
            LyapunovProblem(diag(1.0, 2.0), SymMatrix(np.eye(3)), Identity())


class TestCertify:
    def test_strict_pd_flag(self):
        p = LyapunovProblem(diag(1.0, 2.0), SymMatrix(np.eye(2)), Identity())
        cert = certify(p, strict_pd=True)
        assert cert.strictly_definite is True
        # all-ones solution is semidefinite, not definite
        p2 = LyapunovProblem(diag(1.0, 2.0), SymMatrix(np.ones((2, 2))), Identity())
        cert2 = certify(p2, strict_pd=True)
        assert cert2.verdict.status is PsdStatus.PSD
        assert cert2.strictly_definite is False

    def test_report_serializes(self):
        p = LyapunovProblem(diag(1.0, 3.0), SymMatrix(np.ones((2, 2))), Power(2.0))
        cert = certify(p, strict_pd=True)
        doc = json.dumps(cert.to_json())
        assert "residual" in doc


class TestMatrixFunction:
    def test_identity_returns_a(self):
        a = SymMatrix([[2.0, 1.0], [1.0, 2.0]])
        assert np.allclose(matrix_function(a, Identity()).entries, a.entries, atol=1e-14)

    def test_constant_returns_scaled_identity(self):
        a = SymMatrix([[2.0, 1.0], [1.0, 2.0]])
        out = matrix_function(a, Constant(3.0))
        assert np.allclose(out.entries, 3.0 * np.eye(2), atol=1e-14)

    def test_square_against_matrix_multiply(self):
        a = SymMatrix([[2.0, 1.0], [1.0, 2.0]])
        out = matrix_function(a, Power(2.0))
        assert np.allclose(out.entries, [[5.0, 4.0], [4.0, 5.0]], atol=1e-12)

    def test_commutes_with_argument(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            n = int(rng.integers(2, 10))
            w = rng.standard_normal((n, n))
            sym = 0.5 * (w + w.T)
            a = SymMatrix(sym + (abs(float(np.linalg.eigvalsh(sym)[0])) + 0.5) * np.eye(n))
            f = al_rep(beta=1.0, atoms=((1.0, 1.0),))
            fa = matrix_function(a, f).entries
            comm = a.entries @ fa - fa @ a.entries
            scale = max(1.0, float(np.max(np.abs(fa))), float(np.max(np.abs(a.entries))))
            assert np.max(np.abs(comm)) <= 1e-10 * scale

    def test_domain_violation_names_eigenvalue(self):
        a = diag(0.5, 4.0)
        with pytest.raises(DomainError) as err:
            matrix_function(a, Power(0.5, Interval(1.0, 10.0)))
        assert "0.5" in str(err.value)


class TestProblemFile:
    def test_round_trip(self, tmp_path):
        p = LyapunovProblem(diag(1.0, 3.0), SymMatrix(np.ones((2, 2))), Power(2.0))
        path = tmp_path / "problem.json"
        path.write_text(json.dumps(p.to_json()))
        again = load_problem(path)
        assert np.array_equal(again.A.entries, p.A.entries)
        assert np.array_equal(again.B.entries, p.B.entries)
        assert again.g.to_json() == p.g.to_json()

    def test_missing_field(self):
        with pytest.raises(InputError):
            load_problem({"A": {"dim": 1, "entries": [[1.0]]}})
