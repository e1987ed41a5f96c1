"""Backend kernels: correctness against numpy oracles and cross-backend
bit-identity."""

import numpy as np
import pytest

from antiloewner import _kernels


def _random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return 0.5 * (a + a.T)


def test_active_backend_reported():
    assert _kernels.backend_name() in ("native", "pure")
    assert "pure" in _kernels.available_backends()


def test_jacobi_matches_numpy_oracle():
    rng = np.random.default_rng(11)
    for _ in range(60):
        n = int(rng.integers(1, 17))
        a = _random_symmetric(rng, n)
        w, v, converged = _kernels.jacobi_eigh(a)
        assert converged
        w_np = np.linalg.eigvalsh(a)
        assert np.allclose(w, w_np, atol=1e-12 * max(1.0, np.max(np.abs(w_np))))
        # reconstruction residual well under the contract bound
        res = np.linalg.norm(v @ np.diag(w) @ v.T - a, "fro")
        assert res <= 1e-12 * max(np.linalg.norm(a, "fro"), 1e-300) * n


def test_jacobi_eigenvalues_sorted_and_orthonormal():
    rng = np.random.default_rng(12)
    a = _random_symmetric(rng, 9)
    w, v, _ = _kernels.jacobi_eigh(a)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(v.T @ v, np.eye(9), atol=1e-13)


def test_jacobi_diagonal_input_is_exact():
    d = np.diag([3.0, -1.0, 2.0])
    w, v, converged = _kernels.jacobi_eigh(d)
    assert converged
    assert np.array_equal(w, [-1.0, 2.0, 3.0])
    # permutation matrix, no arithmetic applied
    assert np.array_equal(np.abs(v), np.eye(3)[:, [1, 2, 0]])


def test_ldlt_sign_matches_numpy():
    rng = np.random.default_rng(13)
    for _ in range(200):
        n = int(rng.integers(1, 11))
        a = _random_symmetric(rng, n)
        status, sign, logabs, minrel = _kernels.ldlt_sign_logdet(a)
        det = np.linalg.det(a)
        if status == 0 and sign != 0 and minrel > 1e-9:
            assert sign == (1 if det > 0 else -1)
            assert logabs == pytest.approx(np.log(abs(det)), rel=1e-8)


def test_ldlt_zero_block():
    status, sign, logabs, minrel = _kernels.ldlt_sign_logdet(np.zeros((3, 3)))
    assert (status, sign) == (0, 0)
    assert logabs == -np.inf


def test_ldlt_requests_fallback_for_zero_diagonal():
    # no acceptably large diagonal pivot exists
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    status, _, _, _ = _kernels.ldlt_sign_logdet(a)
    assert status == 1


def test_fill_kernels_are_symmetric_and_exact():
    x = np.array([1.0, 4.0])
    m = _kernels.fill_loewner(x, x**0.5, 0.5 * x**-0.5)
    assert np.array_equal(m, [[0.5, 1.0 / 3.0], [1.0 / 3.0, 0.25]])
    k = _kernels.fill_anti_loewner(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.0, 3.0]))
    assert np.array_equal(k, np.ones((3, 3)))
    g = _kernels.fill_gram(np.array([1.0, 2.0]), 0.0)
    assert np.array_equal(g, [[1.0, 2.0], [2.0, 4.0]])


def test_signed_fill_all_plus_equals_anti_loewner():
    rng = np.random.default_rng(14)
    x = np.sort(rng.uniform(0.1, 10.0, 7))
    gx = rng.uniform(0.1, 10.0, 7)
    plus = np.ones(7)
    assert np.array_equal(
        _kernels.fill_signed(x, gx, plus),
        _kernels.fill_anti_loewner(x, gx),
    )


@pytest.mark.skipif(len(_kernels.available_backends()) < 2,
                    reason="compiled extension not built")
class TestBackendBitIdentity:
    def test_jacobi_bit_identical(self):
        nat = _kernels.get_backend("native")
        pure = _kernels.get_backend("pure")
        rng = np.random.default_rng(15)
        for _ in range(80):
            n = int(rng.integers(1, 14))
            a = _random_symmetric(rng, n)
            w1, v1, c1 = nat.jacobi_eigh(a)
            w2, v2, c2 = pure.jacobi_eigh(a)
            assert c1 == c2
            assert np.array_equal(w1, w2)
            assert np.array_equal(v1, v2)

    def test_ldlt_bit_identical(self):
        nat = _kernels.get_backend("native")
        pure = _kernels.get_backend("pure")
        rng = np.random.default_rng(16)
        for _ in range(200):
            n = int(rng.integers(1, 11))
            a = _random_symmetric(rng, n)
            assert nat.ldlt_sign_logdet(a) == pure.ldlt_sign_logdet(a)

    def test_fills_bit_identical(self):
        nat = _kernels.get_backend("native")
        pure = _kernels.get_backend("pure")
        rng = np.random.default_rng(17)
        x = np.sort(rng.uniform(0.01, 50.0, 9))
        gx = rng.uniform(0.01, 50.0, 9)
        s = rng.choice([-1.0, 1.0], 9)
        assert np.array_equal(nat.fill_loewner(x, gx, gx), pure.fill_loewner(x, gx, gx))
        assert np.array_equal(nat.fill_anti_loewner(x, gx), pure.fill_anti_loewner(x, gx))
        assert np.array_equal(nat.fill_signed(x, gx, s), pure.fill_signed(x, gx, s))
        assert np.array_equal(nat.fill_gram(x, 2.5), pure.fill_gram(x, 2.5))

    def test_set_backend_switch(self):
        original = _kernels.backend_name()
        try:
            _kernels.set_backend("pure")
            assert _kernels.backend_name() == "pure"
            _kernels.set_backend("native")
            assert _kernels.backend_name() == "native"
        finally:
            _kernels.set_backend(original)
