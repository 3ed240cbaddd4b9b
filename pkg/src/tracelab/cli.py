"""Command-line front end: sweeps, probes, counterexamples, DPI batches, identities.

Exit codes: 0 = no contractual violation; 1 = usage error; 2 = in-range DPI
violation, sweep MISMATCH row, or failed identity/closed-form check;
3 = internal numerical failure.  All randomness is seeded; identical command
lines and seeds produce byte-identical CSV (the timestamp header line is
suppressed by ``--no-timestamp``).

A key-value config file (``--config`` or the ``TRACELAB_CONFIG`` environment
variable) can override every default; explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import datetime
import os
import sys
from pathlib import Path

import numpy as np

from .channels import DPI_TOL, SupportError
from .counterexamples import (
    WitnessSearchError,
    find_two_sided_witness,
    find_unit_power_witness,
    find_witness_near_identity_k,
    joint_midpoint_gap,
    joint_midpoint_gap_closed_form,
)
from .linalg import HermiticityError
from .probe import (
    InconclusiveProbeError,
    ProbeConfig,
    Witness,
    probe_gamma,
    probe_lambda,
    probe_lambda_joint_am,
    probe_omega_joint,
    probe_psi_joint,
)
from .serialize import load_config, read_matrix, write_witness
from .sweep import (
    Axis,
    SweepSpec,
    dpi_batch,
    dpi_csv_lines,
    identity_suite,
    run_sweep,
    sweep_csv_lines,
)
from . import theory

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_FAILURE = 3

ENV_CONFIG = "TRACELAB_CONFIG"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _global_flags(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    p.add_argument("--tol", type=float, default=None,
                   help="decision tolerance for this command")
    p.add_argument("--dim", type=str, default=None,
                   help="matrix dimension; comma list where the command batches over dims")
    p.add_argument("--trials", type=int, default=None, help="random trials")
    p.add_argument("--out", type=str, default=None, help="output file or directory")
    p.add_argument("--config", type=str, default=None,
                   help=f"key=value config file (or ${ENV_CONFIG})")
    p.add_argument("--no-timestamp", action="store_true",
                   help="suppress the timestamp header line in CSV output")
    p.add_argument("--force", action="store_true",
                   help="explore outside proven parameter ranges without refusal")


def _load_file_config(args) -> dict:
    path = args.config or os.environ.get(ENV_CONFIG)
    if not path:
        return {}
    return load_config(path)


def _resolve(args, cfg: dict, key: str, default, cast=lambda v: v):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in cfg:
        return cast(cfg[key])
    return default


def _dims(args, cfg, default=(2,)) -> tuple[int, ...]:
    raw = _resolve(args, cfg, "dim", None, str)
    if raw is None:
        return default
    return tuple(int(part) for part in str(raw).split(","))


def _timestamp(args) -> str | None:
    if args.no_timestamp:
        return None
    return datetime.datetime.now().isoformat(timespec="seconds")


def _emit(lines, out: str | None):
    if out is None:
        for line in lines:
            print(line)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text("\n".join(lines) + "\n")


def _fixed_source(spec: str | None, dim: int, seed: int, positive: bool) -> np.ndarray:
    if spec in (None, "identity"):
        return np.eye(dim, dtype=complex)
    if spec == "random":
        rng = np.random.default_rng([seed, 12 if positive else 11])
        from .channels import ginibre
        g = ginibre((dim, dim), rng)
        if positive:
            h = g @ g.conj().T
            return (h + h.conj().T) / 2.0 + 0.1 * np.eye(dim)
        return g
    return read_matrix(spec)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _parse_axis(text: str) -> Axis:
    try:
        name, rng = text.split("=", 1)
        start, stop, step = (float(v) for v in rng.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad axis {text!r}; expected name=start:stop:step") from exc
    return Axis(name=name.strip(), start=start, stop=stop, step=step)


def cmd_sweep(args) -> int:
    cfg = _load_file_config(args)
    axes = tuple(_parse_axis(a) for a in args.axis)
    probe_cfg = ProbeConfig(
        dim=_dims(args, cfg)[0],
        trials=_resolve(args, cfg, "trials", 200, int),
        eta=_resolve(args, cfg, "tol", 1e-9, float),
        seed=_resolve(args, cfg, "seed", 0, int),
    )
    spec = SweepSpec(functional=args.functional, axes=axes,
                     k_source=args.k, m_source=args.m, config=probe_cfg)
    records = run_sweep(spec, witness_dir=args.witness_dir)
    _emit(sweep_csv_lines(spec, records, _timestamp(args)), args.out)
    mismatches = sum(1 for r in records if r.flag == "MISMATCH")
    if mismatches:
        print(f"{mismatches} MISMATCH row(s)", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# probe
# ---------------------------------------------------------------------------

_PROP33_T = 0.9
_PROP33_K = 1e-2


def cmd_probe(args) -> int:
    cfg = _load_file_config(args)
    dim = _dims(args, cfg)[0]
    seed = _resolve(args, cfg, "seed", 0, int)
    probe_cfg = ProbeConfig(
        dim=dim,
        trials=_resolve(args, cfg, "trials", 500, int),
        eta=_resolve(args, cfg, "tol", 1e-9, float),
        seed=seed,
    )
    k = _fixed_source(args.k, dim, seed, positive=False)
    m = _fixed_source(args.m, dim, seed, positive=True)
    if args.preset == "prop33":
        if args.functional != "lambda" or dim != 2:
            raise UsageError("preset prop33 applies to 'lambda' at dim 2")
        k = np.diag([1.0, _PROP33_K]).astype(complex)
        m = np.array([[1.0, _PROP33_T], [_PROP33_T, 1.0]], dtype=complex)

    fn = args.functional
    if fn == "lambda":
        _need(args, "r", "s")
        report = probe_lambda(args.r, args.s, k, m, probe_cfg)
        theory_class = theory.classify_lambda(args.r, args.s)
    elif fn == "gamma":
        _need(args, "p", "s")
        report = probe_gamma(args.p, args.s, k, probe_cfg)
        theory_class = theory.classify_gamma(args.p, args.s)
    elif fn == "psi":
        _need(args, "p", "q", "s")
        report = probe_psi_joint(args.p, args.q, args.s, k, probe_cfg)
        theory_class = theory.classify_psi(args.p, args.q, args.s)
    elif fn == "omega":
        _need(args, "p", "q", "r")
        report = probe_omega_joint(args.p, args.q, args.r, probe_cfg)
        theory_class = theory.classify_omega(args.p, args.q, args.r)
    elif fn == "lambda-joint-am":
        _need(args, "r", "s")
        report = probe_lambda_joint_am(args.r, args.s, k, probe_cfg)
        theory_class = theory.classify_psi(1.0, 2 * args.r, args.s)
    else:
        raise UsageError(f"unknown functional {fn!r}")

    print(f"functional={fn} verdict={report.verdict.value} theory={theory_class}")
    print(f"trials={report.trials} failures={report.failures} "
          f"min_gap={report.min_gap!r} max_gap={report.max_gap!r}")
    for label, w in (("convexity_violation", report.convexity_violation),
                     ("concavity_violation", report.concavity_violation)):
        if w is None:
            print(f"{label}: none")
        else:
            path = ""
            if args.out:
                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                path = out / f"probe_{fn}_{label}.json"
                write_witness(path, w)
                path = f" -> {path}"
            print(f"{label}: gap={w.gap!r}{path}")
    return EXIT_OK


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"missing required parameter(s): {', '.join('--' + n for n in missing)}")


# ---------------------------------------------------------------------------
# counterexample
# ---------------------------------------------------------------------------

def _out_dir(args, default="witnesses") -> Path:
    out = Path(args.out) if args.out else Path(default)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _print_witness_row(tag: str, w: Witness, path) -> None:
    print(f"{tag}: gap={w.gap!r} -> {path}")


def cmd_counterexample(args) -> int:
    cfg = _load_file_config(args)
    seed = _resolve(args, cfg, "seed", 0, int)
    eta = _resolve(args, cfg, "tol", 1e-9, float)
    probe_cfg = ProbeConfig(dim=2, trials=1, eta=eta, seed=seed)
    name = args.name
    out = _out_dir(args)

    if name == "thm22":
        _need(args, "r", "s", "eps")
        if args.r in (0.0, 1.0):
            raise UsageError("r must differ from 0 and 1")
        if args.s <= 0:
            raise UsageError("s must be positive")
        res = find_two_sided_witness(args.r, args.s, args.eps, probe_cfg)
        print(f"two-sided witness at r={args.r} s={args.s}: "
              f"b={res.b} t={res.t} k={res.k!r} x={res.x!r}")
        print(f"||M - I|| = {res.t!r} < eps={args.eps}")
        for tag, w in (("concavity_violation", res.concavity_violation),
                       ("convexity_violation", res.convexity_violation)):
            path = out / f"thm22_{tag}.json"
            write_witness(path, w)
            _print_witness_row(tag, w, path)
        return EXIT_OK

    if name == "cor23":
        _need(args, "r", "s", "eps")
        res = find_witness_near_identity_k(args.r, args.s, args.eps, probe_cfg)
        print(f"near-identity-K witness at r={args.r} s={args.s}: "
              f"t={res.base.t} k={res.base.k!r} x={res.base.x!r}")
        print(f"max transport deviation = {res.max_transport_deviation!r}")
        for tag, w in (("concavity_violation", res.concavity_violation),
                       ("convexity_violation", res.convexity_violation)):
            path = out / f"cor23_{tag}.json"
            write_witness(path, w)
            _print_witness_row(tag, w, path)
        return EXIT_OK

    if name == "prop33":
        _need(args, "s")
        if args.s <= 0:
            raise UsageError("s must be positive")
        res = find_unit_power_witness(args.s, probe_cfg)
        path = out / "prop33_non_concave.json"
        write_witness(path, res.non_concave)
        print(f"non-concavity witness (t={res.non_concave_t}):")
        _print_witness_row("  gap", res.non_concave, path)
        if res.non_convex is not None:
            path = out / "prop33_non_convex.json"
            write_witness(path, res.non_convex)
            print(f"non-convexity witness (t={res.non_convex_t!r}):")
            _print_witness_row("  gap", res.non_convex, path)
        else:
            print("non-convexity witness: not attempted (requires 0 < s < 1/2)")
        return EXIT_OK

    if name == "remark34":
        _need(args, "s")
        value = joint_midpoint_gap(args.s)
        closed = joint_midpoint_gap_closed_form(args.s)
        deviation = abs(value - closed)
        tol = _resolve(args, cfg, "tol", 1e-12, float)
        print(f"joint midpoint gap at s={args.s}: {value!r}")
        print(f"closed form 2 - 2*(45/32)^s:    {closed!r}")
        print(f"absolute deviation:             {deviation!r}")
        if deviation > tol:
            print(f"deviation exceeds {tol!r}", file=sys.stderr)
            return EXIT_VIOLATION
        return EXIT_OK

    raise UsageError(f"unknown counterexample {name!r}")


# ---------------------------------------------------------------------------
# dpi
# ---------------------------------------------------------------------------

def cmd_dpi(args) -> int:
    cfg = _load_file_config(args)
    params = {}
    if args.alpha is not None:
        params["alpha"] = args.alpha
    if args.z is not None:
        params["z"] = args.z
    try:
        batch = dpi_batch(
            entropy=args.entropy,
            params=params,
            dims=_dims(args, cfg),
            trials=_resolve(args, cfg, "trials", 200, int),
            seed=_resolve(args, cfg, "seed", 0, int),
            force=args.force,
            dpi_tol=_resolve(args, cfg, "tol", DPI_TOL, float),
        )
    except KeyError as exc:
        raise UsageError(f"missing entropy parameter {exc}") from exc
    _emit(dpi_csv_lines(batch, _timestamp(args)), args.out)
    print(f"min_gap={batch.min_gap!r} mean_gap={batch.mean_gap!r} "
          f"violations={batch.violations} in_range={batch.in_range}",
          file=sys.stderr)
    if batch.in_range and batch.violations:
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

def cmd_identities(args) -> int:
    cfg = _load_file_config(args)
    checks = identity_suite(
        dims=_dims(args, cfg, default=(2, 3, 4)),
        trials=_resolve(args, cfg, "trials", 200, int),
        seed=_resolve(args, cfg, "seed", 0, int),
        tol=_resolve(args, cfg, "tol", 1e-10, float),
    )
    failed = 0
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{check.name:20s} max_rel_dev={check.max_rel_dev:.3e} "
              f"tol={check.tol:.1e} trials={check.trials} {status}")
        failed += not check.passed
    return EXIT_VIOLATION if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tracelab",
                     description="Trace functionals, relative entropies, and convexity probes")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="parameter-grid sweep with theory comparison")
    p_sweep.add_argument("--functional", required=True,
                         choices=["gamma", "lambda", "psi", "omega", "alpha_z"])
    p_sweep.add_argument("--axis", action="append", required=True,
                         metavar="name=start:stop:step")
    p_sweep.add_argument("--k", default="identity", help="identity | random | matrix file")
    p_sweep.add_argument("--m", default="identity", help="identity | random | matrix file")
    p_sweep.add_argument("--witness-dir", default=None)
    _global_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_probe = sub.add_parser("probe", help="single-point convexity probe")
    p_probe.add_argument("functional",
                         choices=["lambda", "gamma", "psi", "omega", "lambda-joint-am"])
    for flag in ("--r", "--s", "--p", "--q"):
        p_probe.add_argument(flag, type=float, default=None)
    p_probe.add_argument("--k", default="identity")
    p_probe.add_argument("--m", default="identity")
    p_probe.add_argument("--preset", choices=["prop33"], default=None)
    _global_flags(p_probe)
    p_probe.set_defaults(func=cmd_probe)

    p_ce = sub.add_parser("counterexample", help="reproduce a named counterexample construction")
    p_ce.add_argument("name", choices=["thm22", "cor23", "prop33", "remark34"])
    for flag in ("--r", "--s", "--eps"):
        p_ce.add_argument(flag, type=float, default=None)
    _global_flags(p_ce)
    p_ce.set_defaults(func=cmd_counterexample)

    p_dpi = sub.add_parser("dpi", help="random-channel data-processing-inequality batch")
    p_dpi.add_argument("--entropy", required=True,
                       choices=["umegaki", "renyi", "sandwiched", "alpha_z"])
    p_dpi.add_argument("--alpha", type=float, default=None)
    p_dpi.add_argument("--z", type=float, default=None)
    _global_flags(p_dpi)
    p_dpi.set_defaults(func=cmd_dpi)

    p_id = sub.add_parser("identities", help="trace-functional identity suite")
    _global_flags(p_id)
    p_id.set_defaults(func=cmd_identities)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WitnessSearchError, InconclusiveProbeError, HermiticityError,
            SupportError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
