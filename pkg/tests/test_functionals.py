import numpy as np
import pytest

from tracelab import (
    IndefiniteMatrixError,
    SingularMatrixError,
    gamma_ps,
    lambda_rs,
    omega_pqr,
    psi_pqs,
    uplambda,
)

from conftest import bounded_hermitian_invertible, bounded_invertible, bounded_positive

EYE2 = np.eye(2, dtype=complex)


class TestLambda:
    @pytest.mark.parametrize("r,s", [(0.5, 1.0), (2.0, 0.25), (-1.0, 3.0)])
    def test_identity_arguments(self, r, s):
        assert lambda_rs(EYE2, EYE2, EYE2, r, s) == pytest.approx(2.0, abs=1e-13)

    @pytest.mark.parametrize("s", [0.25, 1.0, 2.0])
    def test_joint_midpoint_value(self, s):
        # A = diag(3/4, 3/4), M = diag(5/2, 5/2), r=1 -> 2 (45/32)^s
        a = np.diag([0.75, 0.75])
        m = np.diag([2.5, 2.5])
        assert lambda_rs(a, EYE2, m, 1.0, s) == pytest.approx(2 * (45 / 32) ** s, rel=1e-13)

    @pytest.mark.parametrize("r,b,t", [(0.5, 0.3, 0.2), (2.0, 0.0, 0.4), (1.5, 0.1, -0.3)])
    def test_rank_one_k_keeps_top_entry(self, r, b, t):
        # K = diag(1,0) projects onto the (1,1) entry of A^r M A^r, which is 1
        a = np.diag([1.0, b])
        k = np.diag([1.0, 0.0])
        m = np.array([[1.0, t], [t, 1.0]])
        assert lambda_rs(a, k, m, r, 1.0) == pytest.approx(1.0, abs=1e-13)

    def test_s_zero_rejected(self):
        with pytest.raises(ValueError):
            lambda_rs(EYE2, EYE2, EYE2, 1.0, 0.0)

    def test_negative_s_with_singular_k_errors(self):
        k = np.diag([1.0, 0.0])
        with pytest.raises(SingularMatrixError):
            lambda_rs(EYE2, k, EYE2, 1.0, -1.0)

    def test_indefinite_m_detected(self):
        # M with a large negative eigenvalue makes the inner matrix indefinite
        m = np.diag([1.0, -1.0])
        with pytest.raises(IndefiniteMatrixError):
            lambda_rs(EYE2, EYE2, m, 1.0, 0.5)

    def test_unitary_invariance(self, rng):
        from tracelab import random_unitary
        for _ in range(20):
            a = bounded_positive(3, rng)
            m = bounded_positive(3, rng)
            k = bounded_invertible(3, rng)
            u = random_unitary(3, rng)
            lhs = lambda_rs(u @ a @ u.conj().T, u @ k, u @ m @ u.conj().T, 0.7, 1.3)
            rhs = lambda_rs(a, k, m, 0.7, 1.3)
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_homogeneity_in_k(self, rng):
        a = bounded_positive(2, rng)
        m = bounded_positive(2, rng)
        k = bounded_invertible(2, rng)
        for s in (0.5, 1.7):
            c = 1.9
            lhs = lambda_rs(a, c * k, m, 0.6, s)
            rhs = c ** (2 * s) * lambda_rs(a, k, m, 0.6, s)
            assert lhs == pytest.approx(rhs, rel=1e-12)


class TestGamma:
    def test_square_trace(self):
        assert gamma_ps(np.diag([1.0, 2.0]), EYE2, 2.0, 1.0) == pytest.approx(5.0)

    def test_identity(self):
        eye3 = np.eye(3)
        assert gamma_ps(eye3, eye3, 1.3, 0.7) == pytest.approx(3.0)

    def test_inverse_symmetry(self, rng):
        for _ in range(20):
            a = bounded_positive(3, rng)
            k = bounded_invertible(3, rng)
            p, s = rng.uniform(0.3, 1.8), rng.uniform(0.3, 1.8)
            lhs = gamma_ps(a, k, p, s)
            rhs = gamma_ps(a, np.linalg.inv(k.conj().T), -p, -s)
            assert lhs == pytest.approx(rhs, rel=1e-10)


class TestPsi:
    def test_identity(self):
        assert psi_pqs(EYE2, EYE2, EYE2, 0.7, -0.2, 1.9) == pytest.approx(2.0)

    def test_diagonal(self):
        # tr(B^{1/2} A B^{1/2}) = tr(AB) for commuting diagonals
        a, b = np.diag([1.0, 2.0]), np.diag([3.0, 1.0])
        assert psi_pqs(a, b, EYE2, 1.0, 1.0, 1.0) == pytest.approx(5.0)

    def test_swap_symmetry(self, rng):
        for _ in range(20):
            a = bounded_positive(2, rng)
            b = bounded_positive(2, rng)
            k = bounded_invertible(2, rng)
            p, q, s = rng.uniform(-1.2, 1.2, size=2).tolist() + [rng.uniform(0.3, 1.5)]
            assert psi_pqs(a, b, k, p, q, s) == pytest.approx(
                psi_pqs(b, a, k.conj().T, q, p, s), rel=1e-10)


class TestOmega:
    def test_identity(self):
        assert omega_pqr(EYE2, EYE2, EYE2, 0.3, 1.1, -0.4) == pytest.approx(2.0)

    def test_diagonal(self):
        a, b, c = np.diag([1.0, 2.0]), np.diag([2.0, 3.0]), np.diag([1.0, 1.0])
        # tr(A B A C) with q=2, p=1, r=1: 1*2*1 + 4*3*1 = 14
        assert omega_pqr(a, b, c, 1.0, 2.0, 1.0) == pytest.approx(14.0)

    def test_lambda_link(self, rng):
        for _ in range(20):
            a = bounded_positive(3, rng)
            m = bounded_positive(3, rng)
            k = bounded_invertible(3, rng)
            r = rng.uniform(-1.2, 1.2)
            lhs = lambda_rs(a, k, m, r, 1.0)
            rhs = omega_pqr(a, m, k @ k.conj().T, 1.0, 2 * r, 1.0)
            assert lhs == pytest.approx(rhs, rel=1e-10)


class TestUplambda:
    def test_identity(self):
        assert uplambda(EYE2, EYE2, EYE2, 0.5) == pytest.approx(2.0)

    def test_diagonal_p1(self):
        # p=1: tr(A^{1/2}) for K=M=I
        a = np.diag([4.0, 1.0])
        assert uplambda(a, EYE2, EYE2, 1.0) == pytest.approx(3.0)

    def test_reduces_to_lambda(self, rng):
        a = bounded_positive(2, rng)
        m = bounded_positive(2, rng)
        k = bounded_invertible(2, rng)
        for p in (0.5, 1.0, -0.8, 2.0):
            assert uplambda(a, k, m, p) == pytest.approx(
                lambda_rs(a, k, m, p / 2, 1 / p), rel=1e-12)

    def test_p_zero_rejected(self):
        with pytest.raises(ValueError):
            uplambda(EYE2, EYE2, EYE2, 0.0)


class TestReductionIdentities:
    """Light versions of the identity suite; the acceptance test runs the full counts."""

    def test_gamma_reduction(self, rng):
        for _ in range(20):
            a = bounded_positive(2, rng)
            k = bounded_invertible(2, rng)
            r, s = rng.uniform(-1.2, 1.2), rng.uniform(0.3, 1.8)
            assert lambda_rs(a, k, EYE2, r, s) == pytest.approx(
                gamma_ps(a, k, 2 * r, s), rel=1e-10)

    def test_psi_reduction(self, rng):
        for _ in range(20):
            a = bounded_positive(2, rng)
            m = bounded_positive(2, rng)
            r, s = rng.uniform(-1.2, 1.2), rng.uniform(0.3, 1.8)
            assert lambda_rs(a, EYE2, m, r, s) == pytest.approx(
                psi_pqs(m, a, EYE2, 1.0, 2 * r, s), rel=1e-10)

    def test_similarity_swap(self, rng):
        for _ in range(20):
            a = bounded_positive(2, rng)
            k = bounded_invertible(2, rng)
            mh = bounded_hermitian_invertible(2, rng)
            r, s = rng.uniform(-1.2, 1.2), rng.uniform(0.3, 1.8)
            assert lambda_rs(a, k, mh @ mh, r, s) == pytest.approx(
                lambda_rs(a, mh, k @ k.conj().T, r, s), rel=1e-10)

    def test_gamma_congruence(self, rng):
        from tracelab import matrix_power
        for _ in range(20):
            a = bounded_positive(3, rng)
            m = bounded_positive(3, rng)
            k = bounded_invertible(3, rng)
            s = rng.uniform(0.3, 1.8)
            msqrt = matrix_power(m, 0.5)
            assert lambda_rs(a, k, m, 1.0, s) == pytest.approx(
                gamma_ps(msqrt @ a @ msqrt, matrix_power(m, -0.5) @ k, 2.0, s), rel=1e-10)

    def test_inverse_symmetry(self, rng):
        for _ in range(20):
            a = bounded_positive(2, rng)
            m = bounded_positive(2, rng)
            k = bounded_invertible(2, rng)
            r, s = rng.uniform(-1.2, 1.2), rng.uniform(0.3, 1.8)
            assert lambda_rs(a, k, m, r, s) == pytest.approx(
                lambda_rs(a, np.linalg.inv(k.conj().T), np.linalg.inv(m), -r, -s),
                rel=1e-10)
