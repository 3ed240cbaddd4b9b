"""Closed-form parameter-region classification of the trace functionals.

These are the oracles the sweep compares its empirical verdicts against.
Classification is pure range arithmetic; boundary points belong to the closed
region exactly as the defining inequalities are written.  The tokens are:

* ``"concave"`` / ``"convex"``: proven for every admissible fixed operator;
* ``"affine"``: both (the functional is constant or linear in its arguments);
* ``"neither"``: proven to admit both convexity and concavity violations for
  some admissible fixed operators;
* ``"unknown"``: outside the classified parameter set (never flagged).
"""

from __future__ import annotations

from .entropies import alpha_z_monotone

__all__ = [
    "classify_gamma",
    "classify_lambda",
    "classify_psi",
    "classify_omega",
    "classify_alpha_z",
]

CONCAVE = "concave"
CONVEX = "convex"
AFFINE = "affine"
NEITHER = "neither"
UNKNOWN = "unknown"


def classify_gamma(p: float, s: float) -> str:
    """Convexity class of A -> tr(K* A^p K)^s over all fixed K, for s > 0.

    Concave iff 0 <= p <= 1 and s <= 1/p; convex iff -1 <= p <= 0, or
    1 <= p <= 2 with s >= 1/p.  These ranges are also necessary, so anything
    outside is neither.
    """
    if s <= 0:
        return UNKNOWN
    concave = 0 <= p <= 1 and (p == 0 or s <= 1.0 / p)
    convex = (-1 <= p <= 0) or (1 <= p <= 2 and s >= 1.0 / p)
    if concave and convex:
        return AFFINE
    if concave:
        return CONCAVE
    if convex:
        return CONVEX
    return NEITHER


def classify_lambda(r: float, s: float) -> str:
    """Convexity class of A -> tr[(K* A^r M A^r K)^s] over all invertible K and positive M.

    Convex iff r = 1 and s >= 1/2; never concave; r = 0 degenerates to a
    constant.
    """
    if s <= 0:
        return UNKNOWN
    if r == 0:
        return AFFINE
    if r == 1 and s >= 0.5:
        return CONVEX
    return NEITHER


def classify_psi(p: float, q: float, s: float) -> str:
    """Joint convexity class of (A, B) -> tr(B^{q/2} K* A^p K B^{q/2})^s, s > 0.

    After normalizing to q <= p (allowed by the A/B swap symmetry): jointly
    concave iff 0 <= q <= p <= 1 and s <= 1/(p+q); jointly convex iff
    -1 <= q <= p <= 0, or -1 <= q <= 0 <= 1 <= p <= 2 with (p, q) != (1, -1)
    and s >= 1/(p+q).
    """
    if s <= 0:
        return UNKNOWN
    if q > p:
        p, q = q, p
    if p == 0 and q == 0:
        return AFFINE
    concave = 0 <= q <= p <= 1 and s <= 1.0 / (p + q)
    convex = (-1 <= q <= p <= 0) or (
        -1 <= q <= 0 and 1 <= p <= 2 and (p, q) != (1.0, -1.0)
        and s >= 1.0 / (p + q)
    )
    if concave and convex:
        return AFFINE
    if concave:
        return CONCAVE
    if convex:
        return CONVEX
    return NEITHER


def classify_omega(p: float, q: float, r: float) -> str:
    """Joint convexity class of (A, B, C) -> tr(A^{q/2} B^p A^{q/2} C^r).

    For nonzero exponents: never concave, and convex iff q = 2 with p, r < 0
    and -1 <= p + r < 0.  Zero exponents collapse arguments and are left
    unclassified.
    """
    if p == 0 or q == 0 or r == 0:
        return UNKNOWN
    if q == 2 and p < 0 and r < 0 and -1 <= p + r < 0:
        return CONVEX
    return NEITHER


def classify_alpha_z(alpha: float, z: float) -> str:
    """Monotonicity class of the (alpha, z) relative entropy under channels."""
    try:
        return "monotone" if alpha_z_monotone(alpha, z) else "not_monotone"
    except ValueError:
        return UNKNOWN
