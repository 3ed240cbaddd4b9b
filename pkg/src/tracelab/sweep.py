"""Parameter sweeps, the trace-functional identity suite, and DPI batches.

A sweep walks a small parameter grid, probes each point empirically, and
pairs the verdict with the closed-form theory class.  Rows where the
empirical evidence contradicts the theory are flagged ``MISMATCH``; rows
inside proven-violation regions where the probe found nothing are flagged
``UNDERPOWERED`` (insufficient evidence, not a contradiction).  Per-point
failures land in the ``error`` column and never abort the sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from . import theory
from .channels import DPI_TOL, dpi_gap, random_channel, random_density
from .functionals import gamma_ps, lambda_rs, omega_pqr, psi_pqs, uplambda
from .linalg import matrix_power
from .probe import (
    ProbeConfig,
    Verdict,
    probe_gamma,
    probe_lambda,
    probe_omega_joint,
    probe_psi_joint,
)
from .serialize import read_matrix, write_witness

__all__ = [
    "Axis",
    "SweepSpec",
    "RegionRecord",
    "run_sweep",
    "sweep_csv_lines",
    "SWEEP_COLUMNS",
    "IdentityCheck",
    "identity_suite",
    "DpiBatch",
    "dpi_batch",
    "dpi_csv_lines",
]

FUNCTIONAL_AXES = {
    "gamma": ("p", "s"),
    "lambda": ("r", "s"),
    "psi": ("p", "q", "s"),
    "omega": ("p", "q", "r"),
    "alpha_z": ("alpha", "z"),
}

SWEEP_COLUMNS = ("empirical_verdict", "theory_class", "min_gap", "max_gap",
                 "trials", "seed", "witness_path", "error", "flag")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError(f"axis {self.name}: step must be positive")
        if self.stop < self.start:
            raise ValueError(f"axis {self.name}: stop < start")

    def values(self) -> np.ndarray:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return np.round(self.start + self.step * np.arange(n), 12)


@dataclass(frozen=True)
class SweepSpec:
    functional: str
    axes: tuple[Axis, ...]
    k_source: str = "identity"      # identity | random | <path>
    m_source: str = "identity"
    config: ProbeConfig = field(default_factory=ProbeConfig)
    dpi_tol: float = DPI_TOL

    def __post_init__(self):
        if self.functional not in FUNCTIONAL_AXES:
            raise ValueError(f"unknown functional {self.functional!r}; "
                             f"choose from {sorted(FUNCTIONAL_AXES)}")
        if not self.axes:
            raise ValueError("sweep needs at least one axis")
        if len(self.axes) > 3:
            raise ValueError("at most 3 axes are supported")
        expected = FUNCTIONAL_AXES[self.functional]
        names = tuple(a.name for a in self.axes)
        if set(names) - set(expected):
            raise ValueError(f"axes {names} do not match {self.functional} "
                             f"parameters {expected}")


@dataclass(frozen=True)
class RegionRecord:
    point: dict
    verdict: str = ""
    theory: str = ""
    min_gap: float | None = None
    max_gap: float | None = None
    trials: int = 0
    seed: int = 0
    witness_path: str = ""
    error: str = ""
    flag: str = ""


def _point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=(index,)).generate_state(1)[0])


def _fixed_operator(source: str, dim: int, seed: int, salt: int) -> np.ndarray:
    if source == "identity":
        return np.eye(dim, dtype=complex)
    if source == "random":
        from .channels import ginibre  # positive-definite for m, generic for k
        rng = np.random.default_rng([seed, salt])
        g = ginibre((dim, dim), rng)
        if salt % 2 == 0:    # m-slot: positive definite
            h = g @ g.conj().T
            return (h + h.conj().T) / 2.0 + 0.1 * np.eye(dim)
        return g
    return read_matrix(source)


def _missing_params(spec: SweepSpec) -> dict:
    # Axes may pin only a subset; remaining parameters default to 1.
    expected = FUNCTIONAL_AXES[spec.functional]
    given = {a.name for a in spec.axes}
    return {name: 1.0 for name in expected if name not in given}


def _theory_class(functional: str, pt: dict) -> str:
    if functional == "gamma":
        return theory.classify_gamma(pt["p"], pt["s"])
    if functional == "lambda":
        return theory.classify_lambda(pt["r"], pt["s"])
    if functional == "psi":
        return theory.classify_psi(pt["p"], pt["q"], pt["s"])
    if functional == "omega":
        return theory.classify_omega(pt["p"], pt["q"], pt["r"])
    return theory.classify_alpha_z(pt["alpha"], pt["z"])


def _flag(theory_class: str, verdict: str, has_cv: bool, has_cc: bool) -> str:
    if theory_class == "concave" and has_cc:
        return "MISMATCH"
    if theory_class == "convex" and has_cv:
        return "MISMATCH"
    if theory_class == "affine" and (has_cv or has_cc):
        return "MISMATCH"
    if theory_class == "neither" and verdict != Verdict.NEITHER_WITNESSED.value:
        return "UNDERPOWERED"
    if theory_class == "monotone" and verdict == "DpiViolated":
        return "MISMATCH"
    if theory_class == "not_monotone" and verdict == "DpiConsistent":
        return "UNDERPOWERED"
    return ""


def _probe_point(spec: SweepSpec, pt: dict, cfg: ProbeConfig, k, m):
    if spec.functional == "gamma":
        return probe_gamma(pt["p"], pt["s"], k, cfg)
    if spec.functional == "lambda":
        return probe_lambda(pt["r"], pt["s"], k, m, cfg)
    if spec.functional == "psi":
        return probe_psi_joint(pt["p"], pt["q"], pt["s"], k, cfg)
    if spec.functional == "omega":
        return probe_omega_joint(pt["p"], pt["q"], pt["r"], cfg)
    raise AssertionError(spec.functional)


def _dpi_point(pt: dict, cfg: ProbeConfig, dpi_tol: float):
    alpha, z = pt["alpha"], pt["z"]
    if alpha == 1:
        raise ValueError("alpha = 1 is outside the two-parameter family")
    rng = np.random.default_rng(cfg.seed)
    min_gap, max_gap = math.inf, -math.inf
    for _ in range(cfg.trials):
        ch = random_channel(cfg.dim, cfg.dim, rng=rng)
        rho = random_density(cfg.dim, rng)
        sigma = random_density(cfg.dim, rng)
        report = dpi_gap("alpha_z", {"alpha": alpha, "z": z}, ch, rho, sigma, force=True)
        if report.gap is None:
            continue
        min_gap = min(min_gap, report.gap)
        max_gap = max(max_gap, report.gap)
    verdict = "DpiConsistent" if min_gap >= -dpi_tol else "DpiViolated"
    return verdict, min_gap, max_gap


def run_sweep(spec: SweepSpec, witness_dir=None) -> list[RegionRecord]:
    """Probe every grid point; one record per point, in grid order."""
    from itertools import product
    from pathlib import Path

    base = spec.config
    k = _fixed_operator(spec.k_source, base.dim, base.seed, salt=11)
    m = _fixed_operator(spec.m_source, base.dim, base.seed, salt=12)
    defaults = _missing_params(spec)
    records: list[RegionRecord] = []
    grids = [axis.values() for axis in spec.axes]
    for index, combo in enumerate(product(*grids)):
        pt = {axis.name: float(v) for axis, v in zip(spec.axes, combo)}
        pt.update(defaults)
        seed_i = _point_seed(base.seed, index)
        cfg = replace(base, seed=seed_i)
        theory_class = _theory_class(spec.functional, pt)
        try:
            if spec.functional == "alpha_z":
                verdict, min_gap, max_gap = _dpi_point(pt, cfg, spec.dpi_tol)
                has_cv = has_cc = False
                witness = None
            else:
                report = _probe_point(spec, pt, cfg, k, m)
                verdict = report.verdict.value
                min_gap, max_gap = report.min_gap, report.max_gap
                has_cv = report.convexity_violation is not None
                has_cc = report.concavity_violation is not None
                witness = report.convexity_violation or report.concavity_violation
                if (report.convexity_violation is not None
                        and report.concavity_violation is not None
                        and abs(report.concavity_violation.gap) > abs(witness.gap)):
                    witness = report.concavity_violation
        except Exception as exc:  # per-point failure: record, never abort
            records.append(RegionRecord(point=pt, theory=theory_class,
                                        trials=cfg.trials, seed=seed_i,
                                        error=f"{type(exc).__name__}: {exc}"))
            continue
        witness_path = ""
        if witness is not None and witness_dir is not None:
            path = Path(witness_dir) / f"point{index:04d}_{spec.functional}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            write_witness(path, witness)
            witness_path = str(path)
        records.append(RegionRecord(
            point=pt, verdict=verdict, theory=theory_class,
            min_gap=min_gap, max_gap=max_gap, trials=cfg.trials, seed=seed_i,
            witness_path=witness_path, error="",
            flag=_flag(theory_class, verdict, has_cv, has_cc),
        ))
    return records


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def sweep_csv_lines(spec: SweepSpec, records: list[RegionRecord],
                    timestamp: str | None = None) -> Iterator[str]:
    """CSV rows in grid order: axis values, then the fixed report columns."""
    if timestamp is not None:
        yield f"# generated {timestamp}"
    axis_names = [a.name for a in spec.axes]
    yield ",".join(axis_names + list(SWEEP_COLUMNS))
    for rec in records:
        cells = [_csv_cell(rec.point[name]) for name in axis_names]
        cells += [rec.verdict, rec.theory,
                  _csv_cell(rec.min_gap), _csv_cell(rec.max_gap),
                  str(rec.trials), str(rec.seed), rec.witness_path,
                  rec.error.replace(",", ";"), rec.flag]
        yield ",".join(cells)


# ---------------------------------------------------------------------------
# Trace-functional identity suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    name: str
    max_rel_dev: float
    trials: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_rel_dev <= self.tol


def _haar_unitary(dim, rng):
    from .channels import random_unitary
    return random_unitary(dim, rng)


def _bounded_positive(dim, rng):
    """Positive definite with spectrum in [1/2, 2]; keeps the identities well conditioned."""
    u = _haar_unitary(dim, rng)
    w = rng.uniform(0.5, 2.0, size=dim)
    return (u * w) @ u.conj().T


def _bounded_invertible(dim, rng):
    u = _haar_unitary(dim, rng)
    v = _haar_unitary(dim, rng)
    w = rng.uniform(0.5, 2.0, size=dim)
    return (u * w) @ v.conj().T


def _bounded_hermitian_invertible(dim, rng):
    u = _haar_unitary(dim, rng)
    w = rng.uniform(0.5, 2.0, size=dim) * rng.choice([-1.0, 1.0], size=dim)
    return (u * w) @ u.conj().T


def _rs(rng):
    r = rng.uniform(-1.5, 1.5)
    s = rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0])
    return r, s


def identity_suite(dims=(2, 3, 4), trials: int = 200, seed: int = 0,
                   tol: float = 1e-10) -> list[IdentityCheck]:
    """Max relative deviation of each algebraic identity over random instances.

    The checks, with I the identity and * the adjoint:

    * ``gamma_reduction``:    L(A)[K, I; r, s] = G(A)[K; 2r, s]
    * ``psi_reduction``:      L(A)[I, M; r, s] = P(M, A)[I; 1, 2r, s]
    * ``similarity_swap``:    L(A)[K, M*M; r, s] = L(A)[M, KK*; r, s], M Hermitian
    * ``gamma_congruence``:   L(A)[K, M; 1, s] = G(M^(1/2) A M^(1/2))[M^(-1/2) K; 2, s]
    * ``inverse_symmetry``:   L(A)[K, M; r, s] = L(A)[(K*)^(-1), M^(-1); -r, -s]
    * ``omega_reduction``:    L(A)[K, M; r, 1] = O(A, M, KK*; 1, 2r, 1)
    * ``uplambda_reduction``: U(A)[K, M; p] = L(A)[K, M; p/2, 1/p]
    * ``psi_swap``:           P(A, B)[K; p, q, s] = P(B, A)[K*; q, p, s]
    """
    names = ["gamma_reduction", "psi_reduction", "similarity_swap",
             "gamma_congruence", "inverse_symmetry", "omega_reduction",
             "uplambda_reduction", "psi_swap"]
    devs = {name: 0.0 for name in names}

    def track(name, lhs, rhs):
        rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        if rel > devs[name]:
            devs[name] = rel

    rng = np.random.default_rng(seed)
    for dim in dims:
        for _ in range(trials):
            a = _bounded_positive(dim, rng)
            b = _bounded_positive(dim, rng)
            m = _bounded_positive(dim, rng)
            k = _bounded_invertible(dim, rng)
            mh = _bounded_hermitian_invertible(dim, rng)
            eye = np.eye(dim, dtype=complex)
            r, s = _rs(rng)

            track("gamma_reduction",
                  lambda_rs(a, k, eye, r, s), gamma_ps(a, k, 2 * r, s))
            track("psi_reduction",
                  lambda_rs(a, eye, m, r, s), psi_pqs(m, a, eye, 1.0, 2 * r, s))
            track("similarity_swap",
                  lambda_rs(a, k, mh @ mh, r, s),
                  lambda_rs(a, mh, k @ k.conj().T, r, s))
            track("gamma_congruence",
                  lambda_rs(a, k, m, 1.0, s),
                  gamma_ps(matrix_power(m, 0.5) @ a @ matrix_power(m, 0.5),
                           matrix_power(m, -0.5) @ k, 2.0, s))
            track("inverse_symmetry",
                  lambda_rs(a, k, m, r, s),
                  lambda_rs(a, np.linalg.inv(k.conj().T), np.linalg.inv(m), -r, -s))
            track("omega_reduction",
                  lambda_rs(a, k, m, r, 1.0),
                  omega_pqr(a, m, k @ k.conj().T, 1.0, 2 * r, 1.0))
            p_up = r if r != 0 else 0.5
            track("uplambda_reduction",
                  uplambda(a, k, m, p_up),
                  lambda_rs(a, k, m, p_up / 2.0, 1.0 / p_up))
            q = rng.uniform(-1.5, 1.5)
            s_pos = abs(s)
            track("psi_swap",
                  psi_pqs(a, b, k, r, q, s_pos), psi_pqs(b, a, k.conj().T, q, r, s_pos))
    return [IdentityCheck(name=name, max_rel_dev=devs[name],
                          trials=trials * len(dims), tol=tol) for name in names]


# ---------------------------------------------------------------------------
# DPI batches
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DpiBatch:
    entropy: str
    params: dict
    rows: list          # (dim, trial, DpiReport)
    min_gap: float
    mean_gap: float
    violations: int
    in_range: bool
    dpi_tol: float


def dpi_batch(entropy: str, params: dict | None, dims=(2,), trials: int = 200,
              seed: int = 0, force: bool = False, dpi_tol: float = DPI_TOL) -> DpiBatch:
    """Random (channel, rho, sigma) triples per dimension; gap statistics and violations.

    ``trials`` counts per dimension.  Outside the DPI-valid range the call is
    refused unless forced, in which case violations are expected and merely
    counted.
    """
    from .channels import dpi_valid

    params = dict(params or {})
    in_range = dpi_valid(entropy, params)
    if not in_range and not force:
        raise ValueError(
            f"parameters {params} outside the DPI range for {entropy}; use force to explore"
        )
    rows = []
    gaps = []
    violations = 0
    for dim in dims:
        for trial in range(trials):
            rng = np.random.default_rng([seed, dim, trial])
            ch = random_channel(dim, dim, rng=rng)
            rho = random_density(dim, rng)
            sigma = random_density(dim, rng)
            report = dpi_gap(entropy, params, ch, rho, sigma, force=force)
            rows.append((dim, trial, report))
            if report.gap is not None:
                gaps.append(report.gap)
                if report.gap < -dpi_tol:
                    violations += 1
    min_gap = min(gaps) if gaps else math.inf
    mean_gap = float(np.mean(gaps)) if gaps else math.nan
    return DpiBatch(entropy=entropy, params=params, rows=rows, min_gap=min_gap,
                    mean_gap=mean_gap, violations=violations, in_range=in_range,
                    dpi_tol=dpi_tol)


def dpi_csv_lines(batch: DpiBatch, timestamp: str | None = None) -> Iterator[str]:
    if timestamp is not None:
        yield f"# generated {timestamp}"
    yield "dim,trial,entropy,params,value_in,value_out,gap"
    pstr = ";".join(f"{k}={_csv_cell(v)}" for k, v in sorted(batch.params.items()))
    for dim, trial, report in batch.rows:
        yield ",".join([
            str(dim), str(trial), batch.entropy, pstr,
            _csv_cell(report.value_in), _csv_cell(report.value_out),
            _csv_cell(report.gap),
        ])
