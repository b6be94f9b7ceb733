"""Rank-metric array codes with rack locality.

Exact GF(q) arithmetic and finite-field towers, evaluation codes built
from linearized polynomials whose column blocks form repair groups,
crisscross erasure/error handling with a local-then-global decoder,
lifting to constant-dimension subspace codes, and a noisy-network
download simulator.
"""

from ._kernels import BACKEND, HAS_NUMBA, get_backend
from .codes import (
    DEFAULT_ORACLE_BUDGET,
    CodeParams,
    GabidulinCode,
    LocalRankCode,
    OracleBudgetError,
    build_code,
    enumerate_codewords,
    hamming_distance_bound,
    min_rank_distance,
    rank_distance_bound,
    sampled_min_rank,
)
from .crisscross import (
    AmbiguousErasureError,
    CorrectionReport,
    Cover,
    NearestCodeword,
    correctable,
    crisscross_weight,
    decode_erasures,
    decode_erasures_batch,
    decode_min_distance,
    locally_correctable,
    min_cover_exhaustive,
)
from .gf import (
    Field,
    FieldSpec,
    FieldTower,
    field_make,
    gfq_matmul,
    gfq_rank,
    gfq_rank_batch,
    gfq_row_reduce,
    tower_build,
)
from .linpoly import LinearizedPoly, interpolate, root_space_dim
from .netsim import (
    ChannelConfig,
    ChannelOutput,
    TrialReport,
    channel_apply,
    decode_subspace_min,
    local_candidates,
    run_trials,
    transmit_matrix,
)
from .rng import SplitMix64, mix64
from .subspace import (
    LiftedCode,
    LocalityReport,
    Subspace,
    lift,
    min_subspace_distance,
    rcef,
    subspace_distance,
    verify_subspace_locality,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousErasureError",
    "BACKEND",
    "ChannelConfig",
    "ChannelOutput",
    "CodeParams",
    "CorrectionReport",
    "Cover",
    "DEFAULT_ORACLE_BUDGET",
    "Field",
    "FieldSpec",
    "FieldTower",
    "GabidulinCode",
    "HAS_NUMBA",
    "LiftedCode",
    "LinearizedPoly",
    "LocalRankCode",
    "LocalityReport",
    "NearestCodeword",
    "OracleBudgetError",
    "SplitMix64",
    "Subspace",
    "TrialReport",
    "build_code",
    "channel_apply",
    "correctable",
    "crisscross_weight",
    "decode_erasures",
    "decode_erasures_batch",
    "decode_min_distance",
    "decode_subspace_min",
    "enumerate_codewords",
    "field_make",
    "get_backend",
    "gfq_matmul",
    "gfq_rank",
    "gfq_rank_batch",
    "gfq_row_reduce",
    "hamming_distance_bound",
    "interpolate",
    "lift",
    "local_candidates",
    "locally_correctable",
    "min_cover_exhaustive",
    "min_rank_distance",
    "min_subspace_distance",
    "mix64",
    "rank_distance_bound",
    "rcef",
    "root_space_dim",
    "run_trials",
    "sampled_min_rank",
    "subspace_distance",
    "tower_build",
    "transmit_matrix",
    "verify_subspace_locality",
]
