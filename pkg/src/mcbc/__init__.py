"""Multiset combinatorial batch codes: build, verify, serve and bound them."""

from .bounds import (
    BoundsReport,
    RuleConflict,
    bounds_report,
    build_best_construction,
    construction_upper,
    exact_rules,
    known_exact_N,
    lower_bounds,
    mu_regular,
    profile_bound,
    profile_inequality_check,
    recursive_bound_audit,
)
from .constructions import (
    construct_diagonal,
    construct_distance4,
    construct_from_cwc,
    construct_private,
    construct_regular,
    construct_replication,
    construct_small_n_distinct,
    construct_trivial,
    steiner_to_mcbc,
)
from .cwc import ConstantWeightCode, a_lower, best_known_cwc, graham_sloane_cwc, lexicode
from .designs import SteinerSystem, affine_plane
from .errors import CapExceededError, ParameterError, UnsupportedOrderError
from .gf import FiniteFieldTable, finite_field
from .hall import union_size_table, verify_kt_hall_cbc, verify_multiset_hall
from .io import parse_request, read_code, write_code
from .retrieval import serve_request, verify_exhaustive
from .search import SearchCaps, exhaustive_optimal_N
from .setsystem import (
    Assignment,
    BlockProfile,
    CodeParams,
    McbcCode,
    MultisetRequest,
    SetSystem,
    VerificationResult,
    block_profile,
    dual,
    expand_to_cbc,
    truncate_blocks,
)

__version__ = "0.1.0"
