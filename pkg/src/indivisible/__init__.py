"""Solvers for indivisible coalitional games.

Exact Shapley machinery over rational-valued games, the indivisible
Shapley value (integer payoffs with quota bounds), permutation-sampling
estimators for black-box games, a matching-based object allocator for
positive games, and election adapters.
"""

from .errors import OracleFailure, SolverError, ValidationError
from .games import (
    MAX_TABLE_PLAYERS,
    Game,
    ReducedGame,
    coalition,
    game_linear,
    harsanyi_dividends,
    in_core,
    is_convex,
    is_positive,
    is_size_bounded,
    make_game,
    members,
    reduced_game,
    shapley_exact,
    shapley_matrix_exact,
    unanimity_game,
)
from .isv import IsvResult, indivisible_shapley, isv_oracle_convex, lp_distance, remainder_order
from .large import isv_large, normalize_attributions, select_top_k
from .matching import (
    AllocationResult,
    MatchingGraph,
    OwnerList,
    game_from_owners,
    isv_allocation,
    isv_from_dividends,
    owner_list,
    shapley_from_owners,
)
from .elections import (
    ApprovalProfile,
    Region,
    RegionalVotes,
    apportion_isv,
    coalition_game_from_regions,
    dhondt,
    game_from_approvals,
)
from .sampling import (
    FunctionOracle,
    SamplerConfig,
    SubprocessOracle,
    TableOracle,
    ValueOracle,
    harmonic_tail,
    memoized,
    sample_shapley,
    sample_shapley_matrix,
)

__all__ = [
    "MAX_TABLE_PLAYERS",
    "AllocationResult",
    "ApprovalProfile",
    "FunctionOracle",
    "Game",
    "IsvResult",
    "MatchingGraph",
    "OracleFailure",
    "OwnerList",
    "ReducedGame",
    "Region",
    "RegionalVotes",
    "SamplerConfig",
    "SolverError",
    "SubprocessOracle",
    "TableOracle",
    "ValidationError",
    "ValueOracle",
    "apportion_isv",
    "coalition",
    "coalition_game_from_regions",
    "dhondt",
    "game_from_approvals",
    "game_from_owners",
    "game_linear",
    "harmonic_tail",
    "harsanyi_dividends",
    "in_core",
    "indivisible_shapley",
    "is_convex",
    "is_positive",
    "is_size_bounded",
    "isv_allocation",
    "isv_from_dividends",
    "isv_large",
    "isv_oracle_convex",
    "lp_distance",
    "make_game",
    "members",
    "memoized",
    "normalize_attributions",
    "owner_list",
    "reduced_game",
    "remainder_order",
    "sample_shapley",
    "sample_shapley_matrix",
    "select_top_k",
    "shapley_exact",
    "shapley_from_owners",
    "shapley_matrix_exact",
    "unanimity_game",
]
