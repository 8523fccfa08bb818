"""Splittings of composite Hilbert spaces into orthogonal entangled subspaces."""

from .discrimination import (
    EliminationTable,
    Identifiability,
    MixedState,
    NPTProbeReport,
    Property1Report,
    SetClass,
    StateIdentifiability,
    StateSet,
    check_property1,
    classify_set,
    computational_basis,
    elimination_table,
    identifiable_witness,
    local_basis,
    npt_probe,
)
from .errors import (
    ContractViolation,
    DimensionError,
    EntsplitError,
    NormalizationError,
    PreconditionError,
    ProblemFileError,
    RankDeficiencyError,
    ZeroProbabilityError,
)
from .measurement_sim import (
    OutcomeRecord,
    Property2Report,
    ProjectiveMeasurement,
    certify_property2,
    measure,
    sample_product_states,
)
from .problem import Problem, load_problem, problem_to_dict, save_problem
from .product_search import (
    BiseparabilityReport,
    ProductVerdict,
    SearchConfig,
    VerdictKind,
    certify_2xd_dim2,
    detect_biseparable,
    detect_product,
    max_product_overlap,
    optimize_product_overlap,
)
from .splitting import (
    FIXTURE_IDS,
    EntangledSplittingReport,
    FeasibilityReport,
    Splitting,
    SplittingCheck,
    Subspace,
    feasibility,
    fixture,
    generate_bell_pairing,
    orthonormalize,
    regroup_parties,
    search_splitting,
    verify_entangled_splitting,
    verify_splitting,
)
from .tensor_core import (
    Bipartition,
    Ket,
    Operator,
    TensorSpace,
    all_bipartitions,
    ket_from_labels,
    ket_from_terms,
    partial_transpose,
    product_ket,
    random_local_unitary,
    schmidt_coefficients,
)

__version__ = "0.1.0"
