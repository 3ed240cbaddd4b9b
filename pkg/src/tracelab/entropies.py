"""Quantum relative entropies with explicit support semantics.

Four families are implemented, all in natural log units:

* ``umegaki(rho, sigma)      = tr(rho log rho - rho log sigma)``
* ``renyi(rho, sigma, a)     = log tr(rho^a sigma^(1-a)) / (a - 1)``
* ``sandwiched(rho, sigma, a) = log tr[(sigma^e rho sigma^e)^a] / (a - 1)``
  with ``e = (1-a)/(2a)``
* ``alpha_z(rho, sigma, a, z) = log tr[(sigma^e rho^(a/z) sigma^e)^z] / (a - 1)``
  with ``e = (1-a)/(2z)``

Each returns ``math.inf`` unless the support of ``sigma`` contains the
support of ``rho`` (containment is declared when
``||(I - P_sigma) P_rho||_F <= support_tol``); on the finite branch all
matrix powers are taken on the support of their base.  ``alpha`` within
1e-6 of 1 is rejected to avoid catastrophic cancellation; callers wanting
the limit should use :func:`umegaki` explicitly.
"""

from __future__ import annotations

import math

import numpy as np

from .functionals import psd_trace_power
from .linalg import (
    PSD_TOL,
    SUPPORT_TOL,
    IndefiniteMatrixError,
    eig_hermitian,
    hermitize,
    matrix_power,
)

__all__ = [
    "require_density",
    "umegaki",
    "renyi",
    "sandwiched",
    "alpha_z",
    "alpha_z_monotone",
]

DENSITY_TRACE_TOL = 1e-10
_ALPHA_ONE_GUARD = 1e-6


def require_density(a, psd_tol: float = PSD_TOL,
                    trace_tol: float = DENSITY_TRACE_TOL) -> np.ndarray:
    """Validate a density matrix (Hermitian, PSD within tolerance, unit trace)."""
    w, u = eig_hermitian(a)
    cut = psd_tol * max(float(np.abs(w).max(initial=0.0)), 1.0)
    if w[0] < -cut:
        raise IndefiniteMatrixError(
            f"density matrix has negative eigenvalue {w[0]:.3e}"
        )
    tr = float(np.sum(w))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix has trace {tr!r}, expected 1")
    return (u * w) @ u.conj().T


def _check_pair(rho, sigma):
    rho = hermitize(rho)
    sigma = hermitize(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"state dimension mismatch: {rho.shape} vs {sigma.shape}")
    return rho, sigma


def _support_contained(rho, sigma, psd_tol: float, support_tol: float) -> bool:
    """True when supp(rho) is inside supp(sigma)."""
    wr, ur = eig_hermitian(rho)
    ws, us = eig_hermitian(sigma)
    cut_r = psd_tol * max(float(np.abs(wr).max(initial=0.0)), psd_tol)
    cut_s = psd_tol * max(float(np.abs(ws).max(initial=0.0)), psd_tol)
    pr = ur[:, wr > cut_r]
    kill = us[:, ws <= cut_s]          # columns spanning the kernel of sigma
    if pr.shape[1] == 0:
        return True
    if kill.shape[1] == 0:
        return True
    resid = float(np.linalg.norm(kill.conj().T @ pr))
    return resid <= support_tol


def umegaki(rho, sigma, psd_tol: float = PSD_TOL,
            support_tol: float = SUPPORT_TOL) -> float:
    """Relative entropy tr(rho log rho - rho log sigma); +inf on support violation."""
    rho, sigma = _check_pair(rho, sigma)
    if not _support_contained(rho, sigma, psd_tol, support_tol):
        return math.inf
    wr, ur = eig_hermitian(rho)
    ws, us = eig_hermitian(sigma)
    cut_r = psd_tol * max(float(np.abs(wr).max(initial=0.0)), psd_tol)
    cut_s = psd_tol * max(float(np.abs(ws).max(initial=0.0)), psd_tol)
    keep_r = wr > cut_r
    term1 = float(np.sum(wr[keep_r] * np.log(wr[keep_r])))
    keep_s = ws > cut_s
    # <v_j| rho |v_j> weights of log sigma on the support of sigma
    weights = np.real(np.einsum("ij,ik,kj->j", us[:, keep_s].conj(), rho, us[:, keep_s]))
    term2 = float(np.sum(np.log(ws[keep_s]) * weights))
    return term1 - term2


def _guard_alpha(alpha: float):
    if abs(alpha - 1.0) < _ALPHA_ONE_GUARD:
        raise ValueError(
            "alpha within 1e-6 of 1 is rejected; use umegaki() for the limit"
        )


def renyi(rho, sigma, alpha: float, psd_tol: float = PSD_TOL,
          support_tol: float = SUPPORT_TOL) -> float:
    """Renyi relative entropy log tr(rho^alpha sigma^(1-alpha)) / (alpha - 1)."""
    _guard_alpha(alpha)
    rho, sigma = _check_pair(rho, sigma)
    if not _support_contained(rho, sigma, psd_tol, support_tol):
        return math.inf
    ra = matrix_power(rho, alpha, psd_tol=psd_tol, on_singular="support")
    sb = matrix_power(sigma, 1.0 - alpha, psd_tol=psd_tol, on_singular="support")
    tval = float(np.trace(ra @ sb).real)
    if tval <= 0.0:
        return math.inf
    return math.log(tval) / (alpha - 1.0)


def sandwiched(rho, sigma, alpha: float, psd_tol: float = PSD_TOL,
               support_tol: float = SUPPORT_TOL) -> float:
    """Sandwiched Renyi relative entropy for alpha in (0,1) or (1,inf)."""
    if alpha <= 0:
        raise ValueError(f"sandwiched entropy requires alpha > 0, got {alpha}")
    _guard_alpha(alpha)
    rho, sigma = _check_pair(rho, sigma)
    if not _support_contained(rho, sigma, psd_tol, support_tol):
        return math.inf
    e = (1.0 - alpha) / (2.0 * alpha)
    se = matrix_power(sigma, e, psd_tol=psd_tol, on_singular="support")
    x = hermitize(se @ rho @ se)
    tval = psd_trace_power(x, alpha, psd_tol=psd_tol)
    if tval <= 0.0:
        return math.inf
    return math.log(tval) / (alpha - 1.0)


def alpha_z(rho, sigma, alpha: float, z: float, psd_tol: float = PSD_TOL,
            support_tol: float = SUPPORT_TOL) -> float:
    """Two-parameter Renyi relative entropy; z=1 recovers renyi, z=alpha sandwiched."""
    if z <= 0:
        raise ValueError(f"alpha_z entropy requires z > 0, got {z}")
    _guard_alpha(alpha)
    rho, sigma = _check_pair(rho, sigma)
    if not _support_contained(rho, sigma, psd_tol, support_tol):
        return math.inf
    e = (1.0 - alpha) / (2.0 * z)
    se = matrix_power(sigma, e, psd_tol=psd_tol, on_singular="support")
    ra = matrix_power(rho, alpha / z, psd_tol=psd_tol, on_singular="support")
    x = hermitize(se @ ra @ se)
    tval = psd_trace_power(x, z, psd_tol=psd_tol)
    if tval <= 0.0:
        return math.inf
    return math.log(tval) / (alpha - 1.0)


def alpha_z_monotone(alpha: float, z: float) -> bool:
    """True iff the (alpha, z) entropy is monotone under every quantum channel.

    The region is: 0<alpha<1 with z >= max(alpha, 1-alpha); 1<alpha<=2 with
    alpha/2 <= z <= alpha; or alpha >= 2 with alpha-1 <= z <= alpha.
    """
    if alpha == 1:
        raise ValueError("alpha must differ from 1")
    if z <= 0:
        raise ValueError(f"z must be positive, got {z}")
    if 0 < alpha < 1:
        return z >= max(alpha, 1.0 - alpha)
    if 1 < alpha <= 2:
        return alpha / 2.0 <= z <= alpha
    if alpha > 2:
        return alpha - 1.0 <= z <= alpha
    return False
