"""Parallel quantum adversary bounds for multi-valued functions.

The package computes spectral and combinatorial adversary lower bounds for
``p``-parallel query algorithms, audits the closed forms for approximate
counting by exhaustive enumeration, and checks the progress-measure argument
against exact statevector simulation.
"""
from .adversary import (
    AdversaryMatrix,
    SpectralBoundReport,
    counting_adversary,
    filter_matrix,
    theorem1_bound,
    validate_adversary,
)
from .combinatorics import (
    ClosedFormReport,
    ExtremaReport,
    PaperDiscrepancyWarning,
    RelationTable,
    audit_extrema,
    binom,
    counting_closed_forms,
    enumerate_relation,
    extrema,
    filtered_relation,
    theorem2_bound,
    theorem3_bound,
)
from .model import (
    CountingInstance,
    CountingSpec,
    OracleInput,
    build_counting_instance,
    counting_accepts,
    values_disjoint,
)
from .numerics import overlap, principal_eigenpair, spectral_norm
from .simulator import (
    QueryState,
    Schedule,
    apply_parallel_oracle,
    final_overlap_check,
    grover_success,
    parallel_disjoint_counters,
    phase_estimation_count,
    progress_trace,
    random_schedule,
    run_schedule,
)

__version__ = "0.1.0"
