"""Light-front hadron Hamiltonians on simulated quantum devices.

VQE/SSVQE spectroscopy of small BLFQ meson Hamiltonians with Pauli-operator
encodings, shot and device-noise models, and on-circuit hadron observables
(decay constants, parton distribution functions).
"""

from qblfq._core import (  # noqa: F401
    BasisCatalog,
    BlfqState,
    Circuit,
    DecayResult,
    HamiltonianSource,
    MitigationFilter,
    ModelParams,
    NoiseSpec,
    PauliOperator,
    SpectrumResult,
    StateResult,
    __version__,
    apply_circuit,
    build_calibration_filter,
    build_hea,
    build_ucc_single,
    builtin_hamiltonian,
    calibrate_decay_prefactor,
    chi_l,
    classical_pdf,
    commutes_qubitwise,
    compact_encode,
    decay_projector,
    decay_vector,
    default_pdf_grid,
    density_matrix,
    exact_eigensolve,
    exact_eigensolve_matrix,
    expectation_exact,
    expectation_sampled,
    group_commuting,
    jw_encode_one_body,
    jw_lower,
    jw_raise,
    load_external_hamiltonian,
    measure_decay_constant,
    multiply_strings,
    pdf_operator,
    pdf_scan,
    phi_nm,
    reconstruct_matrix,
    run_ssvqe,
    run_vqe,
)
