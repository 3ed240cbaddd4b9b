"""Randomized convexity/concavity probing of the trace functionals.

A probe draws random argument pairs, evaluates the midpoint gap

    f(X1) + f(X2) - 2 f((X1 + X2)/2)

and classifies the functional by the signs seen: a gap below ``-eta`` refutes
midpoint convexity, a gap above ``eta`` refutes concavity.  Trials alternate
between independent pairs (global chords) and short local chords, which catch
curvature violations confined to small neighbourhoods.  Verdicts are
one-sided evidence only; a ``ConsistentConvex`` verdict never proves
convexity.  Every violation is returned as a replayable :class:`Witness`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channels import as_rng, ginibre, random_positive
from .functionals import gamma_ps, lambda_rs, omega_pqr, psi_pqs
from .linalg import eig_hermitian, hermitize, matrix_power

__all__ = [
    "ProbeConfig",
    "Witness",
    "Verdict",
    "ProbeVerdict",
    "midpoint_gap",
    "second_directional_derivative",
    "witness_gap",
    "spread_positive",
    "probe_lambda",
    "probe_gamma",
    "probe_psi_joint",
    "probe_omega_joint",
    "probe_lambda_joint_am",
    "InconclusiveProbeError",
]


class InconclusiveProbeError(RuntimeError):
    """More than the allowed fraction of trials failed to evaluate."""


@dataclass(frozen=True)
class ProbeConfig:
    dim: int = 2
    trials: int = 500
    eta: float = 1e-9           # violation threshold on midpoint gaps
    seed: int = 0
    step_scale: float = 1e-4    # default step for second-derivative probes
    max_failure_frac: float = 0.1
    cond_max: float = 1e3       # spread of condition numbers for random draws

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.eta <= 0:
            raise ValueError("eta must be positive")


class Verdict(str, Enum):
    CONSISTENT_CONVEX = "ConsistentConvex"
    CONSISTENT_CONCAVE = "ConsistentConcave"
    NEITHER_WITNESSED = "NeitherWitnessed"
    AFFINE_WITHIN_TOL = "AffineWithinTol"


# Registry of functional kinds a Witness can replay.  Each entry maps the
# varying argument tuple plus fixed operators and parameters to a float.
_FUNCTIONALS = {
    "lambda": lambda args, fixed, p: lambda_rs(args[0], fixed["k"], fixed["m"],
                                               p["r"], p["s"]),
    "gamma": lambda args, fixed, p: gamma_ps(args[0], fixed["k"], p["p"], p["s"]),
    "psi_joint": lambda args, fixed, p: psi_pqs(args[0], args[1], fixed["k"],
                                                p["p"], p["q"], p["s"]),
    "omega_joint": lambda args, fixed, p: omega_pqr(args[0], args[1], args[2],
                                                    p["p"], p["q"], p["r"]),
    "lambda_joint_am": lambda args, fixed, p: lambda_rs(args[0], fixed["k"], args[1],
                                                        p["r"], p["s"]),
}


@dataclass(frozen=True)
class Witness:
    """A concrete argument pair certifying a convexity or concavity violation.

    ``left`` and ``right`` hold one matrix per varying argument; replaying the
    midpoint gap from the stored data reproduces ``gap`` exactly.
    """

    functional: str
    params: dict
    left: tuple
    right: tuple
    fixed: dict = field(default_factory=dict)
    gap: float = math.nan
    seed_lineage: tuple = ()

    def __post_init__(self):
        if self.functional not in _FUNCTIONALS:
            raise ValueError(f"unknown functional kind {self.functional!r}")
        object.__setattr__(self, "left", tuple(np.asarray(m, dtype=complex) for m in self.left))
        object.__setattr__(self, "right", tuple(np.asarray(m, dtype=complex) for m in self.right))
        object.__setattr__(self, "fixed",
                           {k: np.asarray(v, dtype=complex) for k, v in self.fixed.items()})


def functional_value(kind: str, args: tuple, fixed: dict, params: dict) -> float:
    return _FUNCTIONALS[kind](args, fixed, params)


def witness_gap(w: Witness) -> float:
    """Recompute the midpoint gap of a stored witness."""
    f = lambda args: functional_value(w.functional, args, w.fixed, w.params)
    return midpoint_gap(f, w.left, w.right)


def midpoint_gap(f, x1, x2) -> float:
    """f(X1) + f(X2) - 2 f((X1+X2)/2); nonnegative for all pairs iff f is midpoint convex.

    Arguments may be single matrices or tuples of matrices (joint probes take
    the midpoint in every slot simultaneously).
    """
    if isinstance(x1, np.ndarray):
        mid = (x1 + x2) / 2.0
        return f(x1) + f(x2) - 2.0 * f(mid)
    mid = tuple((a + b) / 2.0 for a, b in zip(x1, x2))
    return f(tuple(x1)) + f(tuple(x2)) - 2.0 * f(mid)


def second_directional_derivative(f, x, h, step: float | None = None,
                                  eta_floor: float = 1e-14) -> float:
    """Central-difference second derivative (f(X+tH) - 2f(X) + f(X-tH)) / t^2.

    The step is shrunk until both X + tH and X - tH stay positive definite;
    a value below ``-eta`` at some X, H refutes convexity at that point.
    """
    x = hermitize(x)
    h = hermitize(h)
    hnorm = float(np.abs(h).max(initial=0.0))
    if hnorm == 0.0:
        raise ValueError("direction H must be nonzero")
    t = step if step is not None else 1e-4 * max(1.0, float(np.abs(x).max()) / hnorm)
    f0 = f(x)
    for _ in range(80):
        if t < eta_floor:
            raise ValueError("step underflow before positivity was achieved")
        lo = eig_hermitian(x - t * h).eigenvalues[0]
        hi = eig_hermitian(x + t * h).eigenvalues[0]
        if lo > 0 and hi > 0:
            return (f(x + t * h) - 2.0 * f0 + f(x - t * h)) / (t * t)
        t /= 2.0
    raise ValueError("step underflow before positivity was achieved")


@dataclass(frozen=True)
class ProbeVerdict:
    """Outcome of a randomized probe, with witnesses for each violated direction."""

    verdict: Verdict
    trials: int
    failures: int
    min_gap: float
    max_gap: float
    convexity_violation: Witness | None = None
    concavity_violation: Witness | None = None


def spread_positive(dim: int, rng, cond_max: float = 1e3) -> np.ndarray:
    """Ginibre-based positive matrix with condition number log-uniform in [1, cond_max]."""
    rng = as_rng(rng)
    h = random_positive(dim, rng)
    if dim == 1:
        return np.ones((1, 1), dtype=complex)
    w, u = eig_hermitian(h)
    kappa = 10.0 ** rng.uniform(0.0, math.log10(cond_max))
    lo = 1.0 / kappa
    span = w[-1] - w[0]
    wm = np.full_like(w, 1.0) if span == 0 else lo + (w - w[0]) / span * (1.0 - lo)
    out = (u * wm) @ u.conj().T
    return (out + out.conj().T) / 2.0


def _draw_pair(dim: int, rng, cond_max: float, n_args: int, local: bool):
    """Argument pair for one trial.

    Independent draws test global midpoint convexity; local draws take a
    short chord ``X2 = X1 + delta H`` (scaled to keep X2 positive definite),
    whose gap is a second-difference sensing curvature violations confined to
    small neighbourhoods.
    """
    left = tuple(spread_positive(dim, rng, cond_max) for _ in range(n_args))
    if not local:
        return left, tuple(spread_positive(dim, rng, cond_max) for _ in range(n_args))
    right = []
    for x in left:
        h = ginibre((dim, dim), rng)
        h = (h + h.conj().T) / 2.0
        # Largest step keeping x + c h positive definite, from the pencil
        # x^{-1/2} h x^{-1/2}; a random fraction of it spans chord lengths
        # from local curvature sensing up to near the cone boundary.
        inv_sqrt = matrix_power(x, -0.5)
        wmin = float(eig_hermitian(inv_sqrt @ h @ inv_sqrt).eigenvalues[0])
        c_max = math.inf if wmin >= 0 else -1.0 / wmin
        scale = float(np.abs(x).max()) / max(float(np.linalg.norm(h, 2)), 1e-300)
        c = min(c_max, scale) * 10.0 ** rng.uniform(-2.0, math.log10(0.9))
        right.append(x + c * h)
    return left, tuple(right)


def _run_probe(kind: str, params: dict, fixed: dict, n_args: int,
               cfg: ProbeConfig) -> ProbeVerdict:
    rng = as_rng(cfg.seed)
    f = lambda args: functional_value(kind, args, fixed, params)
    min_gap, max_gap = math.inf, -math.inf
    best_neg = best_pos = None          # (gap, left, right, trial)
    failures = 0
    for trial in range(cfg.trials):
        left, right = _draw_pair(cfg.dim, rng, cfg.cond_max, n_args,
                                 local=trial % 2 == 1)
        try:
            gap = midpoint_gap(f, left, right)
        except (np.linalg.LinAlgError, ValueError):
            failures += 1
            continue
        if gap < min_gap:
            min_gap = gap
            if gap < -cfg.eta:
                best_neg = (gap, left, right, trial)
        if gap > max_gap:
            max_gap = gap
            if gap > cfg.eta:
                best_pos = (gap, left, right, trial)
    if failures > cfg.max_failure_frac * cfg.trials:
        raise InconclusiveProbeError(
            f"{failures}/{cfg.trials} trials failed to evaluate"
        )

    def _mk(entry):
        if entry is None:
            return None
        gap, left, right, trial = entry
        return Witness(functional=kind, params=dict(params), left=left, right=right,
                       fixed=dict(fixed), gap=gap, seed_lineage=(cfg.seed, trial))

    convexity_violation = _mk(best_neg)
    concavity_violation = _mk(best_pos)
    if convexity_violation and concavity_violation:
        verdict = Verdict.NEITHER_WITNESSED
    elif convexity_violation:
        verdict = Verdict.CONSISTENT_CONCAVE
    elif concavity_violation:
        verdict = Verdict.CONSISTENT_CONVEX
    else:
        verdict = Verdict.AFFINE_WITHIN_TOL
    return ProbeVerdict(verdict=verdict, trials=cfg.trials, failures=failures,
                        min_gap=min_gap, max_gap=max_gap,
                        convexity_violation=convexity_violation,
                        concavity_violation=concavity_violation)


def probe_lambda(r: float, s: float, k, m, cfg: ProbeConfig | None = None) -> ProbeVerdict:
    """Probe A -> tr[(K* A^r M A^r K)^s] at fixed K, M."""
    cfg = cfg or ProbeConfig()
    return _run_probe("lambda", {"r": r, "s": s}, {"k": k, "m": m}, 1, cfg)


def probe_gamma(p: float, s: float, k, cfg: ProbeConfig | None = None) -> ProbeVerdict:
    """Probe A -> tr[(K* A^p K)^s] at fixed K."""
    cfg = cfg or ProbeConfig()
    return _run_probe("gamma", {"p": p, "s": s}, {"k": k}, 1, cfg)


def probe_psi_joint(p: float, q: float, s: float, k,
                    cfg: ProbeConfig | None = None) -> ProbeVerdict:
    """Probe joint convexity of (A, B) -> tr[(B^{q/2} K* A^p K B^{q/2})^s]."""
    cfg = cfg or ProbeConfig()
    return _run_probe("psi_joint", {"p": p, "q": q, "s": s}, {"k": k}, 2, cfg)


def probe_omega_joint(p: float, q: float, r: float,
                      cfg: ProbeConfig | None = None) -> ProbeVerdict:
    """Probe joint convexity of (A, B, C) -> tr(A^{q/2} B^p A^{q/2} C^r)."""
    cfg = cfg or ProbeConfig()
    return _run_probe("omega_joint", {"p": p, "q": q, "r": r}, {}, 3, cfg)


def probe_lambda_joint_am(r: float, s: float, k,
                          cfg: ProbeConfig | None = None) -> ProbeVerdict:
    """Probe joint convexity of (A, M) -> tr[(K* A^r M A^r K)^s] at fixed K."""
    cfg = cfg or ProbeConfig()
    return _run_probe("lambda_joint_am", {"r": r, "s": s}, {"k": k}, 2, cfg)
