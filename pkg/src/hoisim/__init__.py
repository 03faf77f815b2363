"""Higher-order interference simulator for multi-mode bosonic systems."""

from .analytic import (
    FringeResult,
    KerrCascadeParams,
    coherent_overlap,
    fock_example_i3,
    kerr_cascade_interference,
    saturating_tritter_i3,
)
from .circuits import (
    Circuit,
    CrossKerr,
    LinearCoupler,
    TruncationBoundaryWarning,
    apply_cross_kerr,
    apply_linear,
    beam_splitter,
    build_kerr_cascade,
    circuit_hash,
    make_tritter,
    random_linear_coupler,
)
from .fock import (
    BlockPattern,
    CoherentSpec,
    OccupationBasis,
    QuantumState,
    TailTooLarge,
    all_block_patterns,
    apply_blocking,
    block_mode,
    coherent_amplitudes,
    fock_state,
    make_coherent_state,
    n_max_for_tail,
    number_expectation,
    partial_trace,
    photon_number_distribution,
    poisson_tail,
    superposition_state,
    vacuum_state,
)
from .interference import (
    DetectorModel,
    IntensityTable,
    InterferenceOperator,
    intensity,
    intensity_table,
    interference_operator,
    multipartite_sorkin,
    partial_trace_check,
    scalar_saturation,
    sorkin_subsets,
    sorkin_term,
)

__version__ = "0.1.0"
