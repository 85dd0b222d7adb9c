"""Variational imaginary-time evolution pricer for European and Asian calls.

Thin wrapper over the C++ statevector core.
"""

from ._core import (  # noqa: F401
    AnsatzCircuit,
    AsianRescale,
    EvolutionConfig,
    EvolutionTrace,
    FitResult,
    HamiltonianSpec,
    ImagEvolution,
    OptimizerConfig,
    PauliDecomposition,
    PauliTerm,
    ReferenceTrajectory,
    SpaceGrid,
    StateVector,
    StepRecord,
    TargetState,
    TransformConstants,
    ansatz_depth_search,
    apply_controlled,
    apply_dense,
    apply_pauli_string,
    apply_single,
    asian_hamiltonian,
    assemble_a,
    assemble_c,
    assemble_c_pauli,
    basis_state,
    black_scholes_call,
    build_ansatz,
    derivative_state,
    derivative_state_fd,
    european_hamiltonian,
    evolve,
    exact_imaginary_evolution,
    exact_imaginary_evolution_td,
    fit_theta0,
    gate_cry,
    gate_h,
    gate_ry,
    gate_x,
    gate_y,
    hadamard_test_a_entry,
    inner_product,
    matrix_exponential,
    pauli_decompose,
    pauli_reconstruct,
    payoff_state_asian,
    payoff_state_european,
    prepare_state,
    q_of_t,
    rescale_to_price_asian,
    rescale_to_price_european,
    serialize_circuit,
    solve_thetadot,
    spot_of_y,
    zero_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
