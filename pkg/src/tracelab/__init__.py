"""tracelab: trace functionals, quantum relative entropies, and convexity probing.

The package evaluates the operator trace functionals

    lambda_rs(A)[K, M] = tr[(K* A^r M A^r K)^s]
    gamma_ps(A)[K]     = tr[(K* A^p K)^s]
    psi_pqs(A, B)[K]   = tr[(B^{q/2} K* A^p K B^{q/2})^s]
    omega_pqr(A, B, C) = tr(A^{q/2} B^p A^{q/2} C^r)

exactly through the Hermitian spectral calculus, computes the Umegaki, Renyi,
sandwiched, and two-parameter relative entropies with full support semantics,
applies and samples CPTP channels (with Petz recovery and DPI reports), and
probes convexity/concavity of every functional over the positive-definite
cone, including exact reproductions of the known instability counterexamples.
"""

from .linalg import (
    HERMITICITY_TOL,
    PSD_TOL,
    SUPPORT_TOL,
    EigensolverError,
    HermiticityError,
    IndefiniteMatrixError,
    SingularMatrixError,
    SpectralDecomposition,
    adjoint,
    eig_hermitian,
    frobenius_norm,
    hermitize,
    matrix_log,
    matrix_power,
    operator_norm,
    real_trace,
    support_projector,
    trace,
)
from .functionals import gamma_ps, lambda_rs, omega_pqr, psi_pqs, uplambda
from .entropies import (
    alpha_z,
    alpha_z_monotone,
    renyi,
    require_density,
    sandwiched,
    umegaki,
)
from .channels import (
    DpiReport,
    KrausChannel,
    SupportError,
    alpha_z_equality_residual,
    alpha_z_necessary_residual,
    completely_depolarizing,
    dpi_gap,
    dpi_valid,
    identity_channel,
    petz_recover,
    random_channel,
    random_density,
    random_positive,
    random_unitary,
    sandwiched_equality_residual,
    unitary_channel,
)
from .probe import (
    InconclusiveProbeError,
    ProbeConfig,
    ProbeVerdict,
    Verdict,
    Witness,
    midpoint_gap,
    probe_gamma,
    probe_lambda,
    probe_lambda_joint_am,
    probe_omega_joint,
    probe_psi_joint,
    second_directional_derivative,
    spread_positive,
    witness_gap,
)
from .counterexamples import (
    WitnessSearchError,
    best_b,
    curvature_coefficient,
    find_two_sided_witness,
    find_unit_power_witness,
    find_witness_near_identity_k,
    gap_coefficient,
    joint_midpoint_gap,
    joint_midpoint_gap_closed_form,
    offdiag_gap,
    unit_power_gap,
)
from .sweep import Axis, SweepSpec, dpi_batch, identity_suite, run_sweep
from .theory import (
    classify_alpha_z,
    classify_gamma,
    classify_lambda,
    classify_omega,
    classify_psi,
)

__version__ = "0.1.0"
