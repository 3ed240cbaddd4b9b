"""Exact counterexample constructions for convexity/concavity of the trace functionals.

All constructions live on the 2x2 family

    A1 = diag(1, b),   A2 = I + x offdiag,   K = diag(1, k),   M = [[1, t], [t, 1]]

and certify sign changes of the midpoint gap

    gap(x) = f(A1) + f(A2) - 2 f((A1 + A2)/2)

of ``f(A) = tr[(K* A^r M A^r K)^s]``.  For ``r != 0, 1`` the gap behaves like
``2 s t x g(r, b)`` to leading order in x (at k = 0), so choosing x of either
sign produces both a convexity and a concavity violation for arbitrarily small
off-diagonal ``t`` -- convexity and concavity of the K- and M-pinned
functionals are unstable under perturbations of M away from the identity.
For ``r = 1`` the linear term vanishes and the gap is quadratic,
``~ x^2 h(s, t)``, whose sign is controlled by :func:`curvature_coefficient`.

The searches below shrink ``x`` geometrically (factor 1/2 from 0.1) and
require the expected sign with margin above ``eta`` over three consecutive
scales before accepting a witness; ``k`` starts at 1e-2 and is halved until
the signs stabilize, keeping K invertible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functionals import lambda_rs
from .linalg import operator_norm
from .probe import ProbeConfig, Witness, witness_gap

__all__ = [
    "gap_coefficient",
    "best_b",
    "offdiag_gap",
    "curvature_coefficient",
    "unit_power_gap",
    "TwoSidedWitnesses",
    "find_two_sided_witness",
    "NearIdentityKWitnesses",
    "find_witness_near_identity_k",
    "UnitPowerWitnesses",
    "find_unit_power_witness",
    "joint_midpoint_gap",
    "joint_midpoint_gap_closed_form",
    "WitnessSearchError",
]

X_START = 0.1
X_MAX_HALVINGS = 60
K_START = 1e-2
K_MAX_HALVINGS = 40
SIGN_STABLE_SCALES = 3
B_GRID_STEP = 0.01


class WitnessSearchError(RuntimeError):
    """No sign-stable witness was found within the halving budget."""


def gap_coefficient(r: float, b: float) -> float:
    """Leading-order slope factor g(r, b) of the midpoint gap at k = 0.

    ``g(r, b) = r - 2/(b-1) ((1 + (b-1)/2)^r - 1)`` for ``0 <= b < 1/2``;
    ``g(r, 0) = r + 2^(1-r) - 2``, which vanishes exactly at r = 0 and r = 1,
    is negative for r in (0, 1) and positive outside [0, 1].
    """
    if not 0.0 <= b < 0.5:
        raise ValueError(f"b must lie in [0, 1/2), got {b}")
    c = b - 1.0
    return r - 2.0 / c * ((1.0 + c / 2.0) ** r - 1.0)


def best_b(r: float) -> float:
    """Grid point in {0, 0.01, ..., 0.49} maximizing |g(r, b)|.

    b = 0 makes A1 = diag(1, 0) singular, so it is excluded for r < 0 where
    negative powers of A1 are required.
    """
    grid = np.round(np.arange(0.0, 0.5 - B_GRID_STEP / 2, B_GRID_STEP), 10)
    if r < 0:
        grid = grid[grid > 0]
    vals = np.array([abs(gap_coefficient(r, b)) for b in grid])
    return float(grid[int(np.argmax(vals))])


def _family(b: float, t: float, k: float, x: float):
    a1 = np.diag([1.0, b]).astype(complex)
    a2 = np.array([[1.0, x], [x, 1.0]], dtype=complex)
    km = np.diag([1.0, k]).astype(complex)
    m = np.array([[1.0, t], [t, 1.0]], dtype=complex)
    return a1, a2, km, m


def offdiag_gap(r: float, s: float, b: float, t: float, k: float, x: float) -> float:
    """Midpoint gap of A -> tr[(K* A^r M A^r K)^s] on the canonical 2x2 family.

    Vanishes at x = 0; at k = 0 it satisfies ``gap/x -> 2 s t g(r, b)`` as
    x -> 0.  Requires ``0 <= b < 1/2`` (b > 0 when r < 0), ``|t| < 1``,
    ``|x| < 1/2`` and ``k >= 0``.
    """
    if not 0.0 <= b < 0.5:
        raise ValueError(f"b must lie in [0, 1/2), got {b}")
    if b == 0 and r < 0:
        raise ValueError("b = 0 makes A1 singular; r < 0 requires b > 0")
    if abs(t) >= 1.0:
        raise ValueError(f"|t| must be < 1, got {t}")
    if abs(x) >= 0.5:
        raise ValueError(f"|x| must be < 1/2, got {x}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    a1, a2, km, m = _family(b, t, k, x)
    mid = (a1 + a2) / 2.0
    return (lambda_rs(a1, km, m, r, s) + lambda_rs(a2, km, m, r, s)
            - 2.0 * lambda_rs(mid, km, m, r, s))


def curvature_coefficient(s: float, t: float) -> float:
    """Quadratic gap coefficient h(s, t) = (s^2 t^2 + s (1/2 - t^2)) / 2 for r = 1.

    Only the sign is contractual (the x^2 bookkeeping absorbs constant
    factors): roots in s sit at 0 and 1 - 1/(2 t^2), h(s, 0) = s/4 > 0 for
    s > 0, and h < 0 exactly when 1/2 < t^2 < 1 with 0 < s < 1 - 1/(2 t^2).
    """
    return 0.5 * (s * s * t * t + s * (0.5 - t * t))


def unit_power_gap(s: float, t: float, k: float, x: float) -> float:
    """Midpoint gap of A -> tr[(K* A M A K)^s] at A1 = I, A2 = I + x offdiag.

    For small x the sign equals sign(h(s, t)) from
    :func:`curvature_coefficient`.
    """
    if abs(t) >= 1.0:
        raise ValueError(f"|t| must be < 1, got {t}")
    if abs(x) >= 0.5:
        raise ValueError(f"|x| must be < 1/2, got {x}")
    a1 = np.eye(2, dtype=complex)
    a2 = np.array([[1.0, x], [x, 1.0]], dtype=complex)
    km = np.diag([1.0, k]).astype(complex)
    m = np.array([[1.0, t], [t, 1.0]], dtype=complex)
    mid = (a1 + a2) / 2.0
    return (lambda_rs(a1, km, m, 1.0, s) + lambda_rs(a2, km, m, 1.0, s)
            - 2.0 * lambda_rs(mid, km, m, 1.0, s))


def _scan_sign_stable(gap_at, accept, eta):
    """First x in the halving sequence where *accept* holds for 3 consecutive scales.

    Returns (x, payload) for the first scale of the stable run, or None.
    """
    run = 0
    first = None
    x = X_START
    for _ in range(X_MAX_HALVINGS):
        payload = gap_at(x)
        if accept(payload):
            if run == 0:
                first = (x, payload)
            run += 1
            if run >= SIGN_STABLE_SCALES:
                return first
        else:
            run = 0
            first = None
        x /= 2.0
    return None


@dataclass(frozen=True)
class TwoSidedWitnesses:
    """Invertible K = diag(1, k) and M = [[1,t],[t,1]] with ||M - I|| = |t| < eps,
    plus one concavity-violating and one convexity-violating witness pair."""

    r: float
    s: float
    b: float
    t: float
    k: float
    x: float
    k_matrix: np.ndarray
    m_matrix: np.ndarray
    concavity_violation: Witness
    convexity_violation: Witness


def find_two_sided_witness(r: float, s: float, eps: float,
                           cfg: ProbeConfig | None = None) -> TwoSidedWitnesses:
    """Search the canonical family for a two-sided violation of convexity and concavity.

    For every r outside {0, 1} and s > 0 the functional pinned at
    K = diag(1, k), M = [[1,t],[t,1]] is neither convex nor concave however
    small |t| is; this returns witnesses with both gap signs, each with
    magnitude above the probe threshold, for |t| = eps/2.
    """
    cfg = cfg or ProbeConfig()
    if r in (0.0, 1.0):
        raise ValueError("r must differ from 0 and 1")
    if s <= 0:
        raise ValueError(f"s must be positive, got {s}")
    if not 0 < eps:
        raise ValueError(f"eps must be positive, got {eps}")
    t = eps / 2.0
    b = best_b(r)
    g = gap_coefficient(r, b)
    if abs(g) < 1e-14:
        raise WitnessSearchError(f"leading coefficient vanishes at r={r}, b={b}")
    want = 1.0 if g > 0 else -1.0     # expected sign of gap(+x)

    k = K_START
    trace = []
    for _ in range(K_MAX_HALVINGS):
        found = _scan_sign_stable(
            gap_at=lambda x: (offdiag_gap(r, s, b, t, k, x),
                              offdiag_gap(r, s, b, t, k, -x)),
            accept=lambda gp_gm: (gp_gm[0] * want > cfg.eta
                                  and gp_gm[1] * want < -cfg.eta),
            eta=cfg.eta,
        )
        if found is not None:
            x, (gp, gm) = found
            a1, a2p, km, m = _family(b, t, k, x)
            a2m = np.array([[1.0, -x], [-x, 1.0]], dtype=complex)
            pos_args, pos_gap = ((a2p, gp) if gp > 0 else (a2m, gm))
            neg_args, neg_gap = ((a2m, gm) if gp > 0 else (a2p, gp))
            params = {"r": r, "s": s}
            fixed = {"k": km, "m": m}
            return TwoSidedWitnesses(
                r=r, s=s, b=b, t=t, k=k, x=x, k_matrix=km, m_matrix=m,
                concavity_violation=Witness("lambda", params, (a1,), (pos_args,),
                                            fixed, pos_gap),
                convexity_violation=Witness("lambda", params, (a1,), (neg_args,),
                                            fixed, neg_gap),
            )
        trace.append(f"k={k:.3e}: no sign-stable x in {X_MAX_HALVINGS} halvings")
        k /= 2.0
    raise WitnessSearchError(
        f"no witness for r={r}, s={s}, eps={eps}; search trace: " + "; ".join(trace[-5:])
    )


@dataclass(frozen=True)
class NearIdentityKWitnesses:
    """The two-sided witnesses transported to K_tilde near I and diagonal M_tilde.

    ``K_tilde K_tilde* = M`` and ``M_tilde = K* K`` make the transported
    functional pointwise equal to the original one, so the witness gaps carry
    over without change.
    """

    base: TwoSidedWitnesses
    k_tilde: np.ndarray
    m_tilde: np.ndarray
    concavity_violation: Witness
    convexity_violation: Witness
    max_transport_deviation: float


def find_witness_near_identity_k(r: float, s: float, eps: float,
                                 cfg: ProbeConfig | None = None,
                                 transport_tol: float = 1e-10) -> NearIdentityKWitnesses:
    """Two-sided witness with ||K_tilde - I|| < eps instead of ||M - I|| < eps.

    Valid in the parameter ranges where the K = I functional would otherwise
    be concave (0 < r <= 1/2, 0 < s <= 1/(1+2r)) or convex (-1/2 < r < 0,
    s >= 1/(1+2r)).
    """
    in_concave_range = 0 < r <= 0.5 and 0 < s <= 1.0 / (1.0 + 2.0 * r)
    in_convex_range = -0.5 < r < 0 and s >= 1.0 / (1.0 + 2.0 * r)
    if not (in_concave_range or in_convex_range):
        raise ValueError(
            "requires 0 < r <= 1/2 with 0 < s <= 1/(1+2r), "
            "or -1/2 < r < 0 with s >= 1/(1+2r)"
        )
    base = find_two_sided_witness(r, s, eps, cfg)
    t, k = base.t, base.k
    sp, sm = math.sqrt(1.0 + t), math.sqrt(1.0 - t)
    k_tilde = 0.5 * np.array([[sp + sm, sp - sm], [sp - sm, sp + sm]], dtype=complex)
    m_tilde = np.diag([1.0, k * k]).astype(complex)
    if operator_norm(k_tilde - np.eye(2)) >= eps:
        raise WitnessSearchError(f"||K_tilde - I|| >= eps for t={t}")

    fixed = {"k": k_tilde, "m": m_tilde}
    max_dev = 0.0
    transported = []
    for w in (base.concavity_violation, base.convexity_violation):
        tw = Witness("lambda", dict(w.params), w.left, w.right, fixed, w.gap)
        new_gap = witness_gap(tw)
        dev = abs(new_gap - w.gap)
        if dev > transport_tol * (1.0 + abs(w.gap)):
            raise WitnessSearchError(
                f"transport identity violated: gap deviation {dev:.3e}"
            )
        max_dev = max(max_dev, dev)
        transported.append(Witness("lambda", dict(w.params), w.left, w.right,
                                   fixed, new_gap))
    return NearIdentityKWitnesses(
        base=base, k_tilde=k_tilde, m_tilde=m_tilde,
        concavity_violation=transported[0], convexity_violation=transported[1],
        max_transport_deviation=max_dev,
    )


@dataclass(frozen=True)
class UnitPowerWitnesses:
    """Witnesses against convexity/concavity of A -> tr[(K* A M A K)^s].

    The non-concavity witness uses t with t^2 < 1/2 (h > 0) and exists for
    every s > 0; the non-convexity witness needs h(s, t) < 0, which requires
    s < 1/2, and is None otherwise.
    """

    s: float
    k: float
    non_concave: Witness
    non_concave_t: float
    non_convex: Witness | None
    non_convex_t: float | None


def _unit_power_search(s: float, t: float, want: float, eta: float) -> tuple[float, float, float]:
    """Find (k, x, gap) with sign(gap) = want stable over 3 scales."""
    k = K_START
    for _ in range(K_MAX_HALVINGS):
        found = _scan_sign_stable(
            gap_at=lambda x: unit_power_gap(s, t, k, x),
            accept=lambda gap: gap * want > eta,
            eta=eta,
        )
        if found is not None:
            x, gap = found
            return k, x, gap
        k /= 2.0
    raise WitnessSearchError(f"no sign-stable witness for s={s}, t={t}")


def find_unit_power_witness(s: float, cfg: ProbeConfig | None = None,
                            non_convex_t: float | None = None) -> UnitPowerWitnesses:
    """Witnesses for the r = 1 functional with K = diag(1, k) invertible.

    Always returns a non-concavity witness (t = 0.5); when 0 < s < 1/2 also a
    non-convexity witness with t chosen so that 1 - 1/(2 t^2) > s.
    """
    cfg = cfg or ProbeConfig()
    if s <= 0:
        raise ValueError(f"s must be positive, got {s}")

    t_nc = 0.5
    k_nc, x_nc, gap_nc = _unit_power_search(s, t_nc, +1.0, cfg.eta)
    a1 = np.eye(2, dtype=complex)
    a2 = np.array([[1.0, x_nc], [x_nc, 1.0]], dtype=complex)
    non_concave = Witness(
        "lambda", {"r": 1.0, "s": s}, (a1,), (a2,),
        {"k": np.diag([1.0, k_nc]).astype(complex),
         "m": np.array([[1.0, t_nc], [t_nc, 1.0]], dtype=complex)},
        gap_nc,
    )

    non_convex = None
    t_cv = None
    if s < 0.5:
        t_cv = non_convex_t if non_convex_t is not None else min(
            0.99, (math.sqrt(1.0 / (2.0 * (1.0 - s))) + 0.99) / 2.0)
        if curvature_coefficient(s, t_cv) >= 0:
            raise ValueError(f"t={t_cv} gives h(s, t) >= 0; need 1 - 1/(2t^2) > s")
        k_cv, x_cv, gap_cv = _unit_power_search(s, t_cv, -1.0, cfg.eta)
        a2c = np.array([[1.0, x_cv], [x_cv, 1.0]], dtype=complex)
        non_convex = Witness(
            "lambda", {"r": 1.0, "s": s}, (a1,), (a2c,),
            {"k": np.diag([1.0, k_cv]).astype(complex),
             "m": np.array([[1.0, t_cv], [t_cv, 1.0]], dtype=complex)},
            gap_cv,
        )
    return UnitPowerWitnesses(s=s, k=k_nc, non_concave=non_concave,
                              non_concave_t=t_nc, non_convex=non_convex,
                              non_convex_t=t_cv)


# ---------------------------------------------------------------------------
# Joint-convexity counterexample with a closed form
# ---------------------------------------------------------------------------

_JOINT_A1 = np.diag([0.5, 1.0]).astype(complex)
_JOINT_A2 = np.diag([1.0, 0.5]).astype(complex)
_JOINT_M1 = np.diag([4.0, 1.0]).astype(complex)
_JOINT_M2 = np.diag([1.0, 4.0]).astype(complex)


def joint_midpoint_gap(s: float) -> float:
    """Joint midpoint gap of (A, M) -> tr[(A M A)^s] on the diagonal quadruple.

    Evaluates f(A1, M1)/2 + f(A2, M2)/2 - f((A1+A2)/2, (M1+M2)/2) with
    A1 = diag(1/2, 1), A2 = diag(1, 1/2), M1 = diag(4, 1), M2 = diag(1, 4);
    equals ``2 - 2 (45/32)^s`` in closed form, negative for every s > 0, so
    the functional is not jointly convex for any s.
    """
    eye = np.eye(2, dtype=complex)
    mid_a = (_JOINT_A1 + _JOINT_A2) / 2.0
    mid_m = (_JOINT_M1 + _JOINT_M2) / 2.0
    return (0.5 * lambda_rs(_JOINT_A1, eye, _JOINT_M1, 1.0, s)
            + 0.5 * lambda_rs(_JOINT_A2, eye, _JOINT_M2, 1.0, s)
            - lambda_rs(mid_a, eye, mid_m, 1.0, s))


def joint_midpoint_gap_closed_form(s: float) -> float:
    return 2.0 - 2.0 * (45.0 / 32.0) ** s
