"""cloneforge: simulation and certification toolkit for local cloning of
group-shifted bipartite entangled states."""

from .bounds import (
    BoundReport,
    EntropyGapResult,
    GammaMinBound,
    MonotoneBound,
    MuWeights,
    blank_bound_report,
    check_blank_majorization,
    entropy_gap,
    gamma_min_bound,
    majorization_vectors,
    monotone_bound,
)
from .conditions import (
    ConditionReport,
    check_divisibility_and_character,
    check_equal_gconcurrence,
    check_full_rank,
    check_majorization_compat,
    check_spectrum_condition,
    classify_max_entangled_set,
    extend_to_group,
    qubit_clonability,
    run_battery,
)
from .groups import (
    FiniteGroup,
    direct_product,
    group_from_name,
    make_named_group,
    regular_representation,
    validate,
)
from .linalg import (
    eigenvalues_diagonalizable,
    find_intertwiner,
    phase_invariant_distance,
    svd,
    tensor_product,
    unitarize_similarity,
)
from .protocol import (
    CloningOutcome,
    ProtocolInstance,
    controlled_group_unitary,
    correction_unitary,
    maximally_entangled_blank,
    measurement_family,
    protocol_report,
    run_protocol,
    run_protocol_shift_A,
)
from .states import (
    BipartitePureState,
    MajorizationVerdict,
    SchmidtDecomposition,
    ShiftedSetSpec,
    build_group_shifted,
    dual_of_ket,
    entropy_of_entanglement,
    g_concurrence,
    ket_of_dual,
    majorization_compare,
    schmidt_decompose,
    shannon_entropy,
)

__version__ = "0.1.0"
