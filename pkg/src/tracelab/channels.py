"""CPTP maps in Kraus form, random sampling, Petz recovery, and DPI reports.

Random objects are drawn from Ginibre ensembles: densities as normalized
Wishart matrices ``G G* / tr(G G*)``, unitaries by phase-fixed QR, channels by
slicing an orthonormalized random Stinespring isometry into Kraus blocks.
All samplers take an explicit seed or ``numpy.random.Generator``; the same
seed yields bit-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import entropies
from .linalg import (
    PSD_TOL,
    SUPPORT_TOL,
    as_complex_matrix,
    eig_hermitian,
    frobenius_norm,
    hermitize,
    matrix_power,
)

__all__ = [
    "KrausChannel",
    "identity_channel",
    "unitary_channel",
    "completely_depolarizing",
    "random_unitary",
    "random_density",
    "random_positive",
    "random_channel",
    "petz_recover",
    "DpiReport",
    "dpi_valid",
    "dpi_gap",
    "sandwiched_equality_residual",
    "alpha_z_equality_residual",
    "alpha_z_necessary_residual",
    "SupportError",
]

COMPLETENESS_TOL = 1e-10
DPI_TOL = 1e-8

DPI_RANGE_DOC = {
    "umegaki": "always valid",
    "renyi": "alpha in [0,1) or (1,2]",
    "sandwiched": "alpha >= 1/2, alpha != 1",
    "alpha_z": "(alpha, z) in the monotonicity region",
}


class SupportError(ValueError):
    """Support of one operator is not contained in the support of another."""


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map given by a finite Kraus family.

    Every operator must have the same (d_out, d_in) shape and the family must
    satisfy the completeness relation ``sum K_i* K_i = I`` within tolerance.
    """

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.kraus:
            raise ValueError("Kraus family must be nonempty")
        ops = tuple(as_complex_matrix(k) for k in self.kraus)
        shape = ops[0].shape
        for op in ops[1:]:
            if op.shape != shape:
                raise ValueError("all Kraus operators must share one shape")
        comp = sum(op.conj().T @ op for op in ops)
        dev = float(np.abs(comp - np.eye(shape[1])).max())
        if dev > COMPLETENESS_TOL:
            raise ValueError(
                f"Kraus family is not trace preserving: |sum K*K - I| = {dev:.3e}"
            )
        object.__setattr__(self, "kraus", ops)

    @property
    def d_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.kraus[0].shape[0]

    def apply(self, x) -> np.ndarray:
        """N(X) = sum K_i X K_i*."""
        x = as_complex_matrix(x)
        if x.shape != (self.d_in, self.d_in):
            raise ValueError(f"dimension mismatch: channel expects {self.d_in}, got {x.shape}")
        out = sum(k @ x @ k.conj().T for k in self.kraus)
        return (out + out.conj().T) / 2.0 if _is_hermitian(x) else out

    def adjoint_apply(self, y) -> np.ndarray:
        """N*(Y) = sum K_i* Y K_i; unital whenever N is trace preserving."""
        y = as_complex_matrix(y)
        if y.shape != (self.d_out, self.d_out):
            raise ValueError(f"dimension mismatch: adjoint expects {self.d_out}, got {y.shape}")
        out = sum(k.conj().T @ y @ k for k in self.kraus)
        return (out + out.conj().T) / 2.0 if _is_hermitian(y) else out

    def __call__(self, x) -> np.ndarray:
        return self.apply(x)


def _is_hermitian(x: np.ndarray, tol: float = 1e-12) -> bool:
    return float(np.abs(x - x.conj().T).max(initial=0.0)) <= tol * max(
        1.0, float(np.abs(x).max(initial=0.0))
    )


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((as_complex_matrix(u),))


def completely_depolarizing(dim: int) -> KrausChannel:
    """Maps every state to the maximally mixed state I/dim."""
    ops = []
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = 1.0 / math.sqrt(dim)
            ops.append(e)
    return KrausChannel(tuple(ops))


# ---------------------------------------------------------------------------
# Random sampling
# ---------------------------------------------------------------------------

def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(shape, rng) -> np.ndarray:
    """Matrix of iid standard complex Gaussians."""
    rng = as_rng(rng)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def random_unitary(dim: int, rng) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a Ginibre matrix."""
    q, r = np.linalg.qr(ginibre((dim, dim), rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim: int, rng) -> np.ndarray:
    """Ginibre-induced density matrix G G* / tr(G G*)."""
    g = ginibre((dim, dim), rng)
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return (rho + rho.conj().T) / 2.0


def random_positive(dim: int, rng) -> np.ndarray:
    """Wishart positive definite matrix G G* (almost surely full rank)."""
    g = ginibre((dim, dim), rng)
    h = g @ g.conj().T
    return (h + h.conj().T) / 2.0


def random_channel(d_in: int, d_out: int, env_dim: int | None = None, rng=None) -> KrausChannel:
    """Random CPTP map from an orthonormalized Ginibre Stinespring isometry.

    The environment dimension defaults to ``d_in * d_out``; full-support
    samples avoid the infinite branch of the entropies.
    """
    rng = as_rng(rng)
    env = d_in * d_out if env_dim is None else env_dim
    if env < 1 or d_in < 1 or d_out < 1:
        raise ValueError("dimensions must be positive")
    if d_out * env < d_in:
        raise ValueError("environment too small for an isometry")
    g = ginibre((d_out * env, d_in), rng)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    v = q * (d / np.abs(d))    # isometry: v* v = I_{d_in}
    ops = tuple(v[i * d_out:(i + 1) * d_out, :] for i in range(env))
    return KrausChannel(ops)


# ---------------------------------------------------------------------------
# Petz recovery and DPI
# ---------------------------------------------------------------------------

def _require_support_contained(inner, outer, psd_tol, support_tol, what):
    wr, ur = eig_hermitian(inner)
    ws, us = eig_hermitian(outer)
    cut_r = psd_tol * max(float(np.abs(wr).max(initial=0.0)), psd_tol)
    cut_s = psd_tol * max(float(np.abs(ws).max(initial=0.0)), psd_tol)
    pr = ur[:, wr > cut_r]
    kill = us[:, ws <= cut_s]
    if pr.shape[1] and kill.shape[1]:
        resid = float(np.linalg.norm(kill.conj().T @ pr))
        if resid > support_tol:
            raise SupportError(f"{what}: support containment fails (residual {resid:.3e})")


def petz_recover(rho, channel: KrausChannel, omega, psd_tol: float = PSD_TOL,
                 support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """Petz recovery rho^{1/2} N*(N(rho)^{-1/2} omega N(rho)^{-1/2}) rho^{1/2}.

    Inverse powers of N(rho) are taken on its support; the support of omega
    must be contained in the support of N(rho).
    """
    rho = hermitize(rho)
    omega = hermitize(omega)
    nrho = channel.apply(rho)
    _require_support_contained(omega, nrho, psd_tol, support_tol, "petz_recover")
    inv_sqrt = matrix_power(nrho, -0.5, psd_tol=psd_tol, on_singular="support")
    mid = channel.adjoint_apply(inv_sqrt @ omega @ inv_sqrt)
    sqrt_rho = matrix_power(rho, 0.5, psd_tol=psd_tol, on_singular="support")
    out = sqrt_rho @ mid @ sqrt_rho
    return (out + out.conj().T) / 2.0


@dataclass(frozen=True)
class DpiReport:
    """Evaluation of one data-processing-inequality instance."""

    entropy: str
    params: dict = field(default_factory=dict)
    value_in: float = math.nan
    value_out: float = math.nan
    gap: float | None = None


def _entropy_fn(entropy: str, params: dict):
    if entropy == "umegaki":
        return lambda r, s: entropies.umegaki(r, s)
    if entropy == "renyi":
        alpha = params["alpha"]
        return lambda r, s: entropies.renyi(r, s, alpha)
    if entropy == "sandwiched":
        alpha = params["alpha"]
        return lambda r, s: entropies.sandwiched(r, s, alpha)
    if entropy == "alpha_z":
        alpha, z = params["alpha"], params["z"]
        return lambda r, s: entropies.alpha_z(r, s, alpha, z)
    raise ValueError(f"unknown entropy kind {entropy!r}")


def dpi_valid(entropy: str, params: dict | None = None) -> bool:
    """True when the parameters lie in the range where the DPI is a theorem."""
    params = params or {}
    if entropy == "umegaki":
        return True
    if entropy == "renyi":
        alpha = params["alpha"]
        return 0 <= alpha < 1 or 1 < alpha <= 2
    if entropy == "sandwiched":
        alpha = params["alpha"]
        return alpha >= 0.5 and alpha != 1
    if entropy == "alpha_z":
        return entropies.alpha_z_monotone(params["alpha"], params["z"])
    raise ValueError(f"unknown entropy kind {entropy!r}")


def dpi_gap(entropy: str, params: dict | None, channel: KrausChannel,
            rho, sigma, force: bool = False) -> DpiReport:
    """Evaluate S(rho||sigma) - S(N(rho)||N(sigma)) and report both values.

    Outside the entropy's DPI-valid parameter range the call is refused
    unless ``force=True`` (exploration mode, violations expected).
    """
    params = dict(params or {})
    if not force and not dpi_valid(entropy, params):
        raise ValueError(
            f"parameters {params} outside DPI range for {entropy} "
            f"({DPI_RANGE_DOC[entropy]}); pass force=True to explore"
        )
    f = _entropy_fn(entropy, params)
    value_in = f(rho, sigma)
    value_out = f(channel.apply(hermitize(rho)), channel.apply(hermitize(sigma)))
    gap = None
    if math.isfinite(value_in) and math.isfinite(value_out):
        gap = value_in - value_out
    return DpiReport(entropy=entropy, params=params, value_in=value_in,
                     value_out=value_out, gap=gap)


# ---------------------------------------------------------------------------
# Saturation residuals
# ---------------------------------------------------------------------------

def _saturation_side(rho, sigma, out_exp, in_exp, rho_exp, mid_exp, psd_tol):
    s_in = matrix_power(sigma, in_exp, psd_tol=psd_tol, on_singular="support")
    s_out = (s_in if out_exp == in_exp
             else matrix_power(sigma, out_exp, psd_tol=psd_tol, on_singular="support"))
    rp = (hermitize(rho) if rho_exp == 1
          else matrix_power(rho, rho_exp, psd_tol=psd_tol, on_singular="support"))
    core = matrix_power(hermitize(s_in @ rp @ s_in), mid_exp,
                        psd_tol=psd_tol, on_singular="support")
    return s_out @ core @ s_out


def _saturation_residual(channel, rho, sigma, out_exp, in_exp, rho_exp, mid_exp,
                         psd_tol) -> float:
    lhs = _saturation_side(rho, sigma, out_exp, in_exp, rho_exp, mid_exp, psd_tol)
    image = _saturation_side(channel.apply(hermitize(rho)), channel.apply(hermitize(sigma)),
                             out_exp, in_exp, rho_exp, mid_exp, psd_tol)
    rhs = channel.adjoint_apply(image)
    return frobenius_norm(lhs - rhs)


def sandwiched_equality_residual(channel: KrausChannel, rho, sigma, alpha: float,
                                 psd_tol: float = PSD_TOL) -> float:
    """Frobenius residual of the sandwiched-entropy DPI saturation condition.

    Zero iff the states saturate the DPI at this alpha (alpha >= 1/2,
    alpha != 1); compares
    ``sigma^e (sigma^e rho sigma^e)^(alpha-1) sigma^e`` with the adjoint-channel
    image of the same expression in the output states, ``e = (1-alpha)/(2 alpha)``.
    """
    if alpha < 0.5 or alpha == 1:
        raise ValueError(f"requires alpha >= 1/2, alpha != 1; got {alpha}")
    e = (1.0 - alpha) / (2.0 * alpha)
    return _saturation_residual(channel, rho, sigma, e, e, 1.0, alpha - 1.0, psd_tol)


def alpha_z_equality_residual(channel: KrausChannel, rho, sigma, alpha: float,
                              z: float, psd_tol: float = PSD_TOL) -> float:
    """Frobenius residual of the necessary-and-sufficient alpha-z saturation condition.

    Compares ``sigma^e (sigma^e rho^(alpha/z) sigma^e)^(alpha-1) sigma^e`` with
    its adjoint-channel counterpart, ``e = (1-alpha)/(2z)``; (alpha, z) must be
    in the monotonicity region.
    """
    if not entropies.alpha_z_monotone(alpha, z):
        raise ValueError(f"(alpha={alpha}, z={z}) outside the monotonicity region")
    e = (1.0 - alpha) / (2.0 * z)
    return _saturation_residual(channel, rho, sigma, e, e, alpha / z, alpha - 1.0, psd_tol)


def alpha_z_necessary_residual(channel: KrausChannel, rho, sigma, alpha: float,
                               z: float, psd_tol: float = PSD_TOL) -> float:
    """Frobenius residual of the weaker (necessary-only) alpha-z saturation condition.

    Valid for 1 < alpha <= 2 and alpha/2 <= z <= alpha; the outer exponents are
    ``(1-z)/(2z)`` and the middle power is ``z - 1``.
    """
    if not (1 < alpha <= 2 and alpha / 2.0 <= z <= alpha):
        raise ValueError(
            f"requires 1 < alpha <= 2 and alpha/2 <= z <= alpha; got ({alpha}, {z})"
        )
    out_e = (1.0 - z) / (2.0 * z)
    in_e = (1.0 - alpha) / (2.0 * z)
    return _saturation_residual(channel, rho, sigma, out_e, in_e, alpha / z, z - 1.0, psd_tol)
