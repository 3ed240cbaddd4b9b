"""Dense complex matrix arithmetic and Hermitian spectral calculus.

All values are plain ``numpy`` arrays of complex dtype and every function is
pure, so everything here is safe to call concurrently.  Hermitian inputs are
normalized to ``(A + A*)/2`` on entry; anything whose anti-Hermitian part
exceeds the tolerance is rejected rather than silently symmetrized, since
silent symmetrization of grossly wrong input hides bugs.

Fractional powers and logarithms are defined through the eigendecomposition
``A = U diag(lam) U*``.  Two singularity conventions are supported:

* ``on_singular="error"``: eigenvalues at or below the positivity cutoff are
  an error whenever the requested function is undefined at 0 (negative or
  non-integer powers, logarithms).
* ``on_singular="support"``: the function is applied on the support only and
  eigenvalues at or below the cutoff are sent to 0 (pseudo-powers /
  pseudo-inverses).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

# Default tolerances; every consumer can override them per call.
HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-12          # relative to the largest eigenvalue magnitude
RECONSTRUCTION_TOL = 1e-10
UNITARITY_TOL = 1e-10
SUPPORT_TOL = 1e-8       # Frobenius threshold for support-containment tests
REAL_TRACE_TOL = 1e-11


class HermiticityError(ValueError):
    """Input is further from Hermitian than the allowed tolerance."""


class IndefiniteMatrixError(np.linalg.LinAlgError):
    """A matrix required to be positive semidefinite has a genuinely negative eigenvalue."""


class SingularMatrixError(np.linalg.LinAlgError):
    """A (pseudo-)inverse-like operation hit a zero eigenvalue in strict mode."""


class EigensolverError(np.linalg.LinAlgError):
    """The Hermitian eigensolver failed to converge."""


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting NaN/Inf entries."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def require_square(a) -> np.ndarray:
    arr = as_complex_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def hermitize(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return (A + A*)/2, rejecting input whose anti-Hermitian part exceeds *tol*.

    The threshold scales with the entry magnitude so that roundoff in products
    of large matrices is not misdiagnosed as a conjugation bug.
    """
    arr = require_square(a)
    dev = np.abs(arr - arr.conj().T).max(initial=0.0)
    scale = max(1.0, np.abs(arr).max(initial=0.0))
    if dev > tol * scale:
        raise HermiticityError(
            f"matrix is not Hermitian: max |A - A*| = {dev:.3e} exceeds {tol * scale:.3e}"
        )
    return (arr + arr.conj().T) / 2.0


# ---------------------------------------------------------------------------
# Elementary algebra
# ---------------------------------------------------------------------------

def multiply(a, b) -> np.ndarray:
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch in product: {a.shape} x {b.shape}")
    return a @ b


def add(a, b) -> np.ndarray:
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch in sum: {a.shape} + {b.shape}")
    return a + b


def scale(c, a) -> np.ndarray:
    return complex(c) * as_complex_matrix(a)


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(require_square(a)))


def real_trace(a, tol: float = REAL_TRACE_TOL) -> float:
    """Trace that is contractually real; errors if the imaginary part is not noise."""
    t = trace(a)
    if abs(t.imag) > tol * (1.0 + abs(t.real)):
        raise HermiticityError(f"trace has non-negligible imaginary part {t.imag:.3e}")
    return float(t.real)


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=complex)))


def operator_norm(a) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_complex_matrix(a), 2))


# ---------------------------------------------------------------------------
# Spectral calculus
# ---------------------------------------------------------------------------

class SpectralDecomposition(NamedTuple):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def eig_hermitian(a, tol: float = HERMITICITY_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted ascending."""
    h = hermitize(a, tol)
    try:
        w, u = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        offdiag = float(np.abs(h - np.diag(np.diag(h))).max(initial=0.0))
        raise EigensolverError(
            f"Hermitian eigensolver did not converge (off-diagonal magnitude {offdiag:.3e})"
        ) from exc
    return SpectralDecomposition(w, u)


def min_eigenvalue(a) -> float:
    return float(eig_hermitian(a).eigenvalues[0])


def require_positive_definite(a, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Hermitize and check strict positive definiteness; returns the symmetrized matrix."""
    w, u = eig_hermitian(a)
    cut = psd_tol * max(float(np.abs(w).max(initial=0.0)), 1.0)
    if w[0] <= cut:
        raise IndefiniteMatrixError(
            f"matrix is not positive definite: min eigenvalue {w[0]:.3e} <= cutoff {cut:.3e}"
        )
    return (u * w) @ u.conj().T


def _positivity_cutoff(w: np.ndarray, psd_tol: float) -> float:
    scale = float(np.abs(w).max(initial=0.0))
    return psd_tol * (scale if scale > 0.0 else 1.0)


def _apply_spectral(w, u, fw) -> np.ndarray:
    out = (u * fw) @ u.conj().T
    return (out + out.conj().T) / 2.0


def matrix_power(a, p: float, psd_tol: float = PSD_TOL,
                 on_singular: str = "error") -> np.ndarray:
    """Fractional power ``U diag(lam^p) U*`` of a positive (semi)definite matrix.

    ``p`` may be any real.  Eigenvalues in ``(-cut, 0)`` with
    ``cut = psd_tol * max|lam|`` are clamped to 0 as roundoff; anything below
    ``-cut`` raises :class:`IndefiniteMatrixError`.  Zero eigenvalues raise
    :class:`SingularMatrixError` for negative or non-integer powers in strict
    mode, and are mapped to 0 in support mode.
    """
    if on_singular not in ("error", "support"):
        raise ValueError(f"unknown singularity mode {on_singular!r}")
    w, u = eig_hermitian(a)
    cut = _positivity_cutoff(w, psd_tol)
    if w[0] < -cut:
        raise IndefiniteMatrixError(
            f"matrix power of indefinite matrix: min eigenvalue {w[0]:.3e} < -{cut:.3e}"
        )
    if p == 0:
        return np.eye(w.size, dtype=complex)
    wc = np.clip(w, 0.0, None)
    small = wc <= cut
    if np.any(small):
        if on_singular == "support":
            fw = np.where(small, 0.0, wc)
            with np.errstate(divide="ignore"):
                fw = np.where(small, 0.0, fw ** p)
            return _apply_spectral(wc, u, fw)
        if p < 0 or not float(p).is_integer():
            raise SingularMatrixError(
                f"matrix power {p} undefined at eigenvalue {w[0]:.3e} <= cutoff {cut:.3e}"
            )
        return _apply_spectral(wc, u, np.where(small, 0.0, wc) ** p)
    return _apply_spectral(wc, u, wc ** p)


def matrix_log(a, psd_tol: float = PSD_TOL, on_singular: str = "error") -> np.ndarray:
    """Natural logarithm through the spectral calculus; support mode logs on the support only."""
    if on_singular not in ("error", "support"):
        raise ValueError(f"unknown singularity mode {on_singular!r}")
    w, u = eig_hermitian(a)
    cut = _positivity_cutoff(w, psd_tol)
    if w[0] < -cut:
        raise IndefiniteMatrixError(
            f"matrix log of indefinite matrix: min eigenvalue {w[0]:.3e}"
        )
    small = w <= cut
    if np.any(small):
        if on_singular == "error":
            raise SingularMatrixError(
                f"matrix log undefined at eigenvalue {w[0]:.3e} <= cutoff {cut:.3e}"
            )
        fw = np.where(small, 1.0, np.clip(w, 0.0, None))
        return _apply_spectral(w, u, np.where(small, 0.0, np.log(fw)))
    return _apply_spectral(w, u, np.log(w))


def support_projector(a, tol: float | None = None, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Orthogonal projector onto the eigenspaces of a PSD matrix with eigenvalue > *tol*.

    With ``tol=None`` the positivity cutoff ``psd_tol * max|lam|`` is used.
    An empty support yields the zero matrix.
    """
    w, u = eig_hermitian(a)
    cut = _positivity_cutoff(w, psd_tol) if tol is None else float(tol)
    if w[0] < -max(cut, 0.0):
        raise IndefiniteMatrixError(
            f"support projector of indefinite matrix: min eigenvalue {w[0]:.3e}"
        )
    keep = w > cut
    if not np.any(keep):
        return np.zeros_like(u)
    us = u[:, keep]
    proj = us @ us.conj().T
    return (proj + proj.conj().T) / 2.0
