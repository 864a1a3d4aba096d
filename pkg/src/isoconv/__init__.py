"""Convolutional codes from input/state/output linear systems over finite
fields: construction, group actions, certification (output observability,
GDP, MDP, superregularity), and sliding-window erasure decoding."""

from .actions import ActionSpec, apply_action, compose_actions, invert_action
from .analysis import (
    BudgetExceeded,
    DistanceProfile,
    GdpResult,
    WindowMatrices,
    build_windows,
    column_bound,
    column_distance,
    distance_profile,
    free_distance_estimate,
    is_gdp,
    is_mdp_distances,
    is_mdp_minors,
    is_mds,
    is_output_observable,
    singleton_bound,
    toeplitz_support,
    window_length,
    window_support,
)
from .erasure import (
    ChannelModel,
    DecodeInconsistency,
    DecodeReport,
    ErasedWord,
    channel_erase,
    decode_stream,
    decode_window,
)
from .fields import (
    FieldElement,
    FieldSpec,
    PrimitivityCertificate,
    arith,
    field_create,
    primitive_element,
)
from .fixtures import build_ex1, build_lieb, load_fixture
from .matrices import (
    Matrix,
    MinorBudgetExceeded,
    SolveResult,
    SupportPattern,
    SuperregularReport,
    is_superregular,
    nontrivial_minor_indices,
    solve,
)
from .polys import (
    Poly,
    PolyMatrix,
    column_degrees,
    column_reduce,
    external_degree,
    internal_degree,
    is_unimodular,
    minimal_kernel_basis,
    module_contains,
    modules_equal,
)
from .search import (
    EquivalenceVerdict,
    SearchCriteria,
    are_equivalent,
    conjecture_probe,
    generate_family,
    random_system,
)
from .systems import (
    CodeHandle,
    CompletionError,
    IsoSystem,
    controllability_matrix,
    encode,
    extract_encoder,
    first_order_form,
    forward_trajectory,
    is_observable,
    is_reachable,
    membership,
    observability_matrix,
    transfer_function,
)

__version__ = "0.1.0"
