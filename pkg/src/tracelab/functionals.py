"""Trace functionals of positive matrix arguments.

The central object is ``lambda_rs(A)[K, M] = tr[(K* A^r M A^r K)^s]`` together
with its relatives obtained by pinning arguments:

* ``gamma_ps(A)[K]        = tr(K* A^p K)^s``
* ``psi_pqs(A, B)[K]      = tr(B^{q/2} K* A^p K B^{q/2})^s``
* ``omega_pqr(A, B, C)    = tr(A^{q/2} B^p A^{q/2} C^r)``
* ``uplambda(A)[K, M]     = tr[(K* A^{p/2} M A^{p/2} K)^{1/p}]``

Everything is evaluated exactly through the spectral calculus (no series
expansions).  The inner matrix of the outer ``s``-power is Hermitian positive
semidefinite by construction; eigenvalues that are negative within roundoff
are clamped to zero, genuinely negative ones are an error.  For ``s > 0`` the
power is taken on the support, so singular ``K`` (and PSD-singular ``A`` with
``r >= 0``) are permitted; for ``s < 0`` a singular inner matrix is an error
rather than being extended by continuity.
"""

from __future__ import annotations

import numpy as np

from .linalg import (
    PSD_TOL,
    IndefiniteMatrixError,
    SingularMatrixError,
    as_complex_matrix,
    eig_hermitian,
    hermitize,
    matrix_power,
    real_trace,
)

__all__ = [
    "lambda_rs",
    "gamma_ps",
    "psi_pqs",
    "omega_pqr",
    "uplambda",
    "psd_trace_power",
]


def psd_trace_power(x, s: float, psd_tol: float = PSD_TOL) -> float:
    """tr(X^s) for Hermitian PSD X.

    Eigenvalues in ``(-cut, 0)`` are treated as roundoff zeros, where
    ``cut = psd_tol * max|eig|``.  For ``s > 0`` the zero eigenvalues
    contribute 0; for ``s < 0`` they raise :class:`SingularMatrixError`.
    """
    if s == 0:
        raise ValueError("trace power s must be nonzero")
    w = eig_hermitian(x).eigenvalues
    scale = float(np.abs(w).max(initial=0.0))
    cut = psd_tol * (scale if scale > 0.0 else 1.0)
    if w[0] < -cut:
        raise IndefiniteMatrixError(
            f"inner matrix is indefinite: min eigenvalue {w[0]:.3e} < -{cut:.3e}"
        )
    if s < 0:
        if w[0] <= cut:
            raise SingularMatrixError(
                f"singular inner matrix with negative trace power s={s}"
            )
        return float(np.sum(w ** s))
    pos = w[w > cut]
    return float(np.sum(pos ** s))


def _power_mode(exponent: float) -> str:
    # Nonnegative powers extend to the PSD boundary; negative ones do not.
    return "support" if exponent >= 0 else "error"


def lambda_rs(a, k, m, r: float, s: float, psd_tol: float = PSD_TOL) -> float:
    """tr[(K* A^r M A^r K)^s] for positive definite A, M and arbitrary K."""
    k = as_complex_matrix(k)
    m = hermitize(m)
    ar = matrix_power(a, r, psd_tol=psd_tol, on_singular=_power_mode(r))
    inner = k.conj().T @ ar @ m @ ar @ k
    return psd_trace_power(inner, s, psd_tol=psd_tol)


def gamma_ps(a, k, p: float, s: float, psd_tol: float = PSD_TOL) -> float:
    """tr[(K* A^p K)^s] for positive definite A and arbitrary K."""
    k = as_complex_matrix(k)
    ap = matrix_power(a, p, psd_tol=psd_tol, on_singular=_power_mode(p))
    inner = k.conj().T @ ap @ k
    return psd_trace_power(inner, s, psd_tol=psd_tol)


def psi_pqs(a, b, k, p: float, q: float, s: float, psd_tol: float = PSD_TOL) -> float:
    """tr[(B^{q/2} K* A^p K B^{q/2})^s] for positive definite A, B and arbitrary K."""
    k = as_complex_matrix(k)
    ap = matrix_power(a, p, psd_tol=psd_tol, on_singular=_power_mode(p))
    bq2 = matrix_power(b, q / 2.0, psd_tol=psd_tol, on_singular=_power_mode(q / 2.0))
    inner = bq2 @ k.conj().T @ ap @ k @ bq2
    return psd_trace_power(inner, s, psd_tol=psd_tol)


def omega_pqr(a, b, c, p: float, q: float, r: float, psd_tol: float = PSD_TOL) -> float:
    """tr(A^{q/2} B^p A^{q/2} C^r) for positive definite A, B, C."""
    aq2 = matrix_power(a, q / 2.0, psd_tol=psd_tol, on_singular=_power_mode(q / 2.0))
    bp = matrix_power(b, p, psd_tol=psd_tol, on_singular=_power_mode(p))
    cr = matrix_power(c, r, psd_tol=psd_tol, on_singular=_power_mode(r))
    return real_trace(aq2 @ bp @ aq2 @ cr)


def uplambda(a, k, m, p: float, psd_tol: float = PSD_TOL) -> float:
    """tr[(K* A^{p/2} M A^{p/2} K)^{1/p}]; the trace power is tied to the matrix power."""
    if p == 0:
        raise ValueError("uplambda requires p != 0")
    return lambda_rs(a, k, m, p / 2.0, 1.0 / p, psd_tol=psd_tol)
