"""Pair-identification communication game with classical and qubit messages."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DimensionMismatch,
    DomainError,
    InsufficientData,
    InvalidRecord,
    NormalizationError,
    ResourceLimit,
)
from .qubit import (  # noqa: E402
    EPS_ALG,
    EPS_NUM,
    QubitState,
    TwoOutcomeMeasurement,
    born_probability,
    helstrom_measurement,
    helstrom_success,
    make_state,
    overlap,
    sample_outcome,
)
from .game import (  # noqa: E402
    ClassicalStrategy,
    GameSpec,
    QuantumStrategy,
    SuccessMatrix,
    allowed_sets,
    average_success,
    canonical_spec,
    min_cell,
    success_matrix,
    wins,
)
from .classical import (  # noqa: E402
    balanced_partition_optimum,
    brute_force_optimum,
    min_levels_to_win,
)
from .quantum import (  # noqa: E402
    Ensemble,
    delta_bound_d3,
    delta_bound_d4,
    has_universal_coherence,
    maximize_delta,
    optimize_ensemble,
    pairwise_linearly_independent,
    polygon,
    qrac_reference,
    tetrad,
    trine,
)
from .records import RoundRecord, read_records, write_records  # noqa: E402
from .sim import empirical_average, simulate, simulate_arrays  # noqa: E402
from .certify import (  # noqa: E402
    CellCounts,
    Verdict,
    WitnessReport,
    certify_coherence,
    certify_quantumness,
    empirical_matrix,
    witness_value,
)
