"""Retrieve observable expectations from noisy quantum states.

The package decides whether tr[rho O] survives a channel N (preservation),
prices the optimal quasi-probability retriever by SDP or closed form, runs
the sampling protocol that realizes it, and plans measurement budgets for
Pauli Hamiltonians under local noise.
"""

from .channels import (
    ChoiMap,
    KrausChannel,
    NotCompletelyPositive,
    NotTracePreserving,
    adjoint,
    apply,
    apply_adjoint,
    as_choi,
    choi_to_kraus,
    compose,
    depolarizing_probs,
    identity_channel,
    is_trace_scaling,
    kraus_to_choi,
    make_case_study,
    make_depolarizing,
    make_gad,
    make_mixed_pauli,
    make_unitary,
    superoperator,
    tensor,
    transfer_matrix,
)
from .cost import (
    INFEASIBLE,
    NUMERICAL_TROUBLE,
    OPTIMAL,
    InformationDestroyed,
    RetrieverDecomposition,
    SdpSolution,
    SolverFailure,
    analytic_gad_cost,
    analytic_pauli_cost,
    conventional_pec_cost,
    gamma_min_hpts,
    retrieving_cost_approx,
    retrieving_cost_dual,
    retrieving_cost_sdp,
)
from .io import (
    fixture_hamiltonian_path,
    load_channel,
    load_hamiltonian,
    load_observable,
    load_retriever,
    load_state,
    save_report,
    save_retriever,
    write_csv,
)
from .linalg import (
    check_density_matrix,
    frobenius_inner,
    hermitian_basis,
    hermitian_eig,
    hermitianize,
    kron,
    kron_all,
    numerical_rank,
    partial_trace,
    pauli_matrix,
    paulis_commute,
)
from .mitigation import (
    Hamiltonian,
    PlanReport,
    PlanTerm,
    cost_grid,
    float_range,
    parse_hamiltonian,
    plan_budget,
    term_gammas,
)
from .protocol import (
    EstimateReport,
    ObservableNotNormalized,
    ProtocolConfig,
    coverage_trial,
    exact_recovery,
    hoeffding_rounds,
    sampling_rounds,
    simulate_protocol,
)
from .shadow import (
    PreservationReport,
    ShadowProfile,
    check_preservation,
    construct_witness_retriever,
    effective_shadow_dimension,
    is_invertible,
    shadow_destructivity,
    shadow_profile,
)

__version__ = "0.1.0"

__all__ = [
    "ChoiMap",
    "EstimateReport",
    "Hamiltonian",
    "INFEASIBLE",
    "InformationDestroyed",
    "KrausChannel",
    "NUMERICAL_TROUBLE",
    "NotCompletelyPositive",
    "NotTracePreserving",
    "OPTIMAL",
    "ObservableNotNormalized",
    "PlanReport",
    "PlanTerm",
    "PreservationReport",
    "ProtocolConfig",
    "RetrieverDecomposition",
    "SdpSolution",
    "ShadowProfile",
    "SolverFailure",
    "adjoint",
    "analytic_gad_cost",
    "analytic_pauli_cost",
    "apply",
    "apply_adjoint",
    "as_choi",
    "check_density_matrix",
    "check_preservation",
    "choi_to_kraus",
    "compose",
    "construct_witness_retriever",
    "conventional_pec_cost",
    "cost_grid",
    "coverage_trial",
    "depolarizing_probs",
    "effective_shadow_dimension",
    "exact_recovery",
    "fixture_hamiltonian_path",
    "float_range",
    "frobenius_inner",
    "gamma_min_hpts",
    "hermitian_basis",
    "hermitian_eig",
    "hermitianize",
    "hoeffding_rounds",
    "identity_channel",
    "is_invertible",
    "is_trace_scaling",
    "kraus_to_choi",
    "kron",
    "kron_all",
    "load_channel",
    "load_hamiltonian",
    "load_observable",
    "load_retriever",
    "load_state",
    "make_case_study",
    "make_depolarizing",
    "make_gad",
    "make_mixed_pauli",
    "make_unitary",
    "numerical_rank",
    "parse_hamiltonian",
    "partial_trace",
    "pauli_matrix",
    "paulis_commute",
    "plan_budget",
    "retrieving_cost_approx",
    "retrieving_cost_dual",
    "retrieving_cost_sdp",
    "sampling_rounds",
    "save_report",
    "save_retriever",
    "shadow_destructivity",
    "shadow_profile",
    "simulate_protocol",
    "superoperator",
    "tensor",
    "term_gammas",
    "transfer_matrix",
    "write_csv",
]
