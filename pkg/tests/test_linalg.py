import math

import numpy as np
import pytest

from tracelab import (
    HermiticityError,
    IndefiniteMatrixError,
    SingularMatrixError,
    adjoint,
    eig_hermitian,
    frobenius_norm,
    hermitize,
    matrix_log,
    matrix_power,
    operator_norm,
    real_trace,
    support_projector,
    trace,
)
from tracelab.linalg import add, as_complex_matrix, multiply, scale

from conftest import random_hermitian


class TestEig:
    def test_diagonal(self):
        w, u = eig_hermitian(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(w, [1.0, 3.0])
        # eigenvectors are a permutation of identity columns
        np.testing.assert_allclose(np.abs(u), np.eye(2)[:, ::-1], atol=1e-14)

    def test_2x2_hand_computed(self):
        # characteristic polynomial of [[2,1],[1,2]]: (2-x)^2 - 1 -> x in {1, 3}
        w, _ = eig_hermitian(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(w, [1.0, 3.0], atol=1e-14)

    def test_identity(self):
        dec = eig_hermitian(np.eye(4))
        np.testing.assert_allclose(dec.eigenvalues, np.ones(4))
        u = dec.eigenvectors
        np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)

    def test_ascending_order(self, rng):
        for _ in range(20):
            w, _ = eig_hermitian(random_hermitian(6, rng))
            assert np.all(np.diff(w) >= 0)

    def test_deterministic(self, rng):
        a = random_hermitian(5, rng)
        d1 = eig_hermitian(a)
        d2 = eig_hermitian(a.copy())
        assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
        assert np.array_equal(d1.eigenvectors, d2.eigenvectors)

    def test_rejects_non_hermitian(self):
        with pytest.raises(HermiticityError):
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_reconstruction(self, rng):
        for dim in (2, 5, 11):
            a = random_hermitian(dim, rng)
            dec = eig_hermitian(a)
            err = frobenius_norm(dec.reconstruct() - a)
            assert err <= 1e-10 * max(1.0, frobenius_norm(a))


class TestMatrixPower:
    def test_identity_any_power(self):
        np.testing.assert_allclose(matrix_power(np.eye(3), -3.7), np.eye(3), atol=1e-14)

    def test_half_power_hand_computed(self):
        # [[2,1],[1,2]]^(1/2) via eigenvalues {1,3} and the (1,±1) eigenbasis
        root3 = math.sqrt(3.0)
        expected = np.array([[(root3 + 1) / 2, (root3 - 1) / 2],
                             [(root3 - 1) / 2, (root3 + 1) / 2]])
        got = matrix_power(np.array([[2.0, 1.0], [1.0, 2.0]]), 0.5)
        np.testing.assert_allclose(got, expected, atol=1e-14)

    def test_diagonal_sqrt(self):
        np.testing.assert_allclose(matrix_power(np.diag([4.0, 9.0]), 0.5),
                                   np.diag([2.0, 3.0]), atol=1e-14)

    def test_power_one_is_identity_map(self, rng):
        a = random_hermitian(4, rng)
        a = a @ a.conj().T + 0.1 * np.eye(4)
        np.testing.assert_allclose(matrix_power(a, 1.0), a, atol=1e-12)

    def test_zero_power(self, rng):
        a = np.diag([2.0, 3.0])
        np.testing.assert_allclose(matrix_power(a, 0.0), np.eye(2))

    def test_negative_power_of_singular_errors(self):
        with pytest.raises(SingularMatrixError):
            matrix_power(np.diag([1.0, 0.0]), -1.0)

    def test_fractional_power_of_singular_errors_in_strict_mode(self):
        with pytest.raises(SingularMatrixError):
            matrix_power(np.diag([1.0, 0.0]), 0.5)

    def test_support_mode_pseudo_powers(self):
        a = np.diag([4.0, 0.0])
        np.testing.assert_allclose(matrix_power(a, 0.5, on_singular="support"),
                                   np.diag([2.0, 0.0]), atol=1e-14)
        np.testing.assert_allclose(matrix_power(a, -1.0, on_singular="support"),
                                   np.diag([0.25, 0.0]), atol=1e-14)

    def test_integer_power_of_singular_ok(self):
        np.testing.assert_allclose(matrix_power(np.diag([3.0, 0.0]), 2),
                                   np.diag([9.0, 0.0]), atol=1e-14)

    def test_indefinite_rejected(self):
        with pytest.raises(IndefiniteMatrixError):
            matrix_power(np.diag([1.0, -1.0]), 0.5)

    def test_power_law(self, rng):
        for _ in range(30):
            g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            a = g @ g.conj().T + 0.2 * np.eye(4)
            p, q = rng.uniform(-2, 2, size=2)
            lhs = matrix_power(a, p + q)
            rhs = matrix_power(a, p) @ matrix_power(a, q)
            assert frobenius_norm(lhs - rhs) <= 1e-9 * max(1.0, frobenius_norm(lhs))

    def test_commutes_with_base(self, rng):
        g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        a = g @ g.conj().T + 0.1 * np.eye(5)
        ap = matrix_power(a, 0.7)
        comm = ap @ a - a @ ap
        assert frobenius_norm(comm) <= 1e-9 * max(1.0, frobenius_norm(ap) * frobenius_norm(a))


class TestMatrixLog:
    def test_identity(self):
        np.testing.assert_allclose(matrix_log(np.eye(3)), np.zeros((3, 3)), atol=1e-14)

    def test_diagonal(self):
        got = matrix_log(np.diag([math.e, math.e ** 2]))
        np.testing.assert_allclose(got, np.diag([1.0, 2.0]), atol=1e-13)

    def test_log_of_power_scales(self, rng):
        g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        a = g @ g.conj().T + 0.3 * np.eye(3)
        np.testing.assert_allclose(matrix_log(matrix_power(a, 2.0)),
                                   2.0 * matrix_log(a), atol=1e-10)

    def test_singular_errors(self):
        with pytest.raises(SingularMatrixError):
            matrix_log(np.diag([1.0, 0.0]))


class TestPlumbing:
    def test_trace_identity(self):
        assert trace(np.eye(3)) == pytest.approx(3.0)

    def test_adjoint(self):
        a = np.array([[0.0, 1j], [0.0, 0.0]])
        np.testing.assert_allclose(adjoint(a), np.array([[0.0, 0.0], [-1j, 0.0]]))

    def test_frobenius(self):
        assert frobenius_norm(np.diag([3.0, 4.0])) == pytest.approx(5.0)

    def test_operator_norm(self):
        assert operator_norm(np.diag([3.0, -7.0])) == pytest.approx(7.0)

    def test_multiply_shape_mismatch(self):
        with pytest.raises(ValueError):
            multiply(np.ones((2, 3)), np.ones((2, 3)))

    def test_add_scale(self):
        a = np.eye(2)
        np.testing.assert_allclose(add(a, a), 2 * np.eye(2))
        np.testing.assert_allclose(scale(2.0, a), 2 * np.eye(2))

    def test_trace_cyclicity(self, rng):
        for _ in range(30):
            x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            y = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            lhs, rhs = trace(x @ y), trace(y @ x)
            scale_ref = max(1.0, frobenius_norm(x) * frobenius_norm(y))
            assert abs(lhs - rhs) <= 1e-11 * scale_ref

    def test_real_trace_rejects_complex(self):
        with pytest.raises(HermiticityError):
            real_trace(np.array([[1j, 0], [0, 0]]))

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            as_complex_matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestHermitize:
    def test_symmetrizes_roundoff(self):
        a = np.array([[1.0, 0.5 + 1e-14], [0.5, 2.0]])
        h = hermitize(a)
        np.testing.assert_allclose(h, h.conj().T)

    def test_rejects_gross_asymmetry(self):
        with pytest.raises(HermiticityError):
            hermitize(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_diagonal_real_after_normalization(self, rng):
        h = hermitize(random_hermitian(4, rng))
        assert np.abs(h.diagonal().imag).max() == 0.0


class TestSupportProjector:
    def test_diagonal(self):
        np.testing.assert_allclose(support_projector(np.diag([1.0, 0.0]), 1e-10),
                                   np.diag([1.0, 0.0]), atol=1e-14)

    def test_identity(self):
        np.testing.assert_allclose(support_projector(np.eye(3), 1e-10), np.eye(3), atol=1e-14)

    def test_threshold(self):
        got = support_projector(np.diag([2.0, 1e-15]), 1e-10)
        np.testing.assert_allclose(got, np.diag([1.0, 0.0]), atol=1e-14)

    def test_empty_support(self):
        np.testing.assert_allclose(support_projector(np.zeros((2, 2)), 1e-10),
                                   np.zeros((2, 2)))

    def test_idempotent(self, rng):
        g = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        a = g @ g.conj().T     # rank 2 PSD
        p = support_projector(a, 1e-10)
        np.testing.assert_allclose(p @ p, p, atol=1e-12)
        assert np.trace(p).real == pytest.approx(2.0, abs=1e-10)
