"""Distributed quantum linear algebra simulator with per-message communication ledgers."""

from __future__ import annotations

from .baselines import (
    ClassicalOutcome,
    SqAccess,
    SqDemoReport,
    classical_naive_regression,
    induced_distribution,
    sq_rank2_demo,
    sq_sample,
    tv_distance,
)
from .blockenc import (
    BlockEncoding,
    UseCost,
    encoded_identity,
    hermitian_dilation,
    stack_lcu,
    sum_lcu,
    unitary_dilation,
    verify_block_encoding,
)
from .comm import (
    CSV_COLUMNS,
    DistributedState,
    Message,
    MessageLedger,
    Register,
    Topology,
    ledger_report,
    local_apply,
    remote_apply,
    routed_apply,
    send_classical,
    send_registers,
    shared_randomness,
)
from .errors import (
    ContractError,
    DegenerateInputError,
    DistQLAError,
    NumericalFailureError,
    PhaseFindingError,
    TopologyViolationError,
)
from .instances import (
    Instance,
    appendixA_index_regression,
    disjointness_regression,
    fourier_sampling_instance,
    gamma_regression,
    hadamard_hamiltonian_instance,
    index_pauli_instance,
    multiparty_regression,
    permutation_index_instance,
    scaled_disjointness_regression,
    sq_counterexample,
)
from .linalg import Svd, SpectrumStats, pseudoinverse, spectrum_stats, sv_function, svd
from .protocols import (
    ProtocolOutcome,
    coordinator_regression,
    coordinator_state_prep_b,
    coordinator_sum_regression,
    hamiltonian_sim_coordinator,
    hamiltonian_sim_two_party,
    regression_case1_b_to_a,
    regression_case2_a_to_b,
    regression_case3_two_way,
)
from .qsvt import ChebyshevPoly, PhaseSequence, find_phases, inverse_poly, jacobi_anger, qsp_sequence, qsvt_encoding
from .vtaa import fit_exponent, gapped_phase_estimation, truncated_inverse, vtaa_solve

__all__ = [name for name in dir() if not name.startswith("_") and name != "annotations"]
