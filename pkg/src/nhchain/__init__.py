"""Steady-state parameter estimation in lossy non-Hermitian spin-1/2 chains.

The package builds the chain generator (nearest-neighbor pair creation with
on-site loss and a transverse field on site 1), extracts its slowest-decaying
eigenstate, and computes spectra, imaginary-part gaps, exceptional points,
steady-state observables, quantum Fisher information and finite-size scaling
fits.  A CLI (``nhchain``) persists parameter sweeps as CSV.
"""

__version__ = "0.1.0"

from .critical import (
    EpCurve,
    EpPoint,
    ScalingFit,
    ep_curve,
    find_ep_J,
    fit_inverse_poly,
    gap_at,
)
from .errors import (
    ConvergenceError,
    DegeneracyError,
    DenseSizeError,
    EPProximityError,
)
from .hamiltonian import ChainParams, build_h0, build_h1, build_total
from .observables import (
    ObservableRecord,
    correlation_profile,
    correlation_records,
    correlations_two_site,
    expectation,
    magnetizations_two_site,
    pair_correlation_op,
    site_magnetizations,
)
from .operators import (
    SparseOperator,
    embed,
    embed_pair,
    identity_op,
    op_add,
    op_matvec,
    op_scale,
    op_sum,
    pauli,
)
from .qfi import (
    QfiEstimate,
    cramer_rao,
    fidelity_qfi_from_states,
    qfi_fidelity,
    qfi_two_site_analytic,
    qfi_vector_fd,
    vector_fd_qfi_from_states,
)
from .spectral import (
    DEFAULT_SEED,
    SteadyState,
    Spectrum,
    dense_eigenvalues,
    dense_spectrum,
    eigenvalues_two_site,
    evolve,
    phase_gauge,
    solve_steady_state,
    steady_state_dense,
    steady_state_krylov,
    steady_state_two_site,
)

__all__ = [
    "ChainParams",
    "ConvergenceError",
    "DEFAULT_SEED",
    "DegeneracyError",
    "DenseSizeError",
    "EPProximityError",
    "EpCurve",
    "EpPoint",
    "ObservableRecord",
    "QfiEstimate",
    "ScalingFit",
    "SparseOperator",
    "Spectrum",
    "SteadyState",
    "__version__",
    "build_h0",
    "build_h1",
    "build_total",
    "correlation_profile",
    "correlation_records",
    "correlations_two_site",
    "cramer_rao",
    "dense_eigenvalues",
    "dense_spectrum",
    "eigenvalues_two_site",
    "embed",
    "embed_pair",
    "ep_curve",
    "evolve",
    "expectation",
    "fidelity_qfi_from_states",
    "find_ep_J",
    "fit_inverse_poly",
    "gap_at",
    "identity_op",
    "magnetizations_two_site",
    "op_add",
    "op_matvec",
    "op_scale",
    "op_sum",
    "pair_correlation_op",
    "pauli",
    "phase_gauge",
    "qfi_fidelity",
    "qfi_two_site_analytic",
    "qfi_vector_fd",
    "site_magnetizations",
    "solve_steady_state",
    "steady_state_dense",
    "steady_state_krylov",
    "steady_state_two_site",
    "vector_fd_qfi_from_states",
]
