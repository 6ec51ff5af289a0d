"""Combinatorics of hom-shifts: folds, universal covers, heights, pivots and entropy counts."""

from .cover import (
    CoverVertex,
    cover_ball,
    cover_distance,
    cover_neighbors,
    deck_transform,
    make_vertex,
    reduce_concat,
)
from .entropy import (
    EntropyReport,
    count_box_patterns,
    entropy_report,
    periodic_count,
    single_site_fillable,
    strip_estimate,
)
from .errors import (
    HomShiftError,
    InvalidInputError,
    InvalidParameterError,
    NothingToFoldError,
    ParityError,
    PreconditionError,
    RangeTooLargeError,
    ResourceLimitError,
    UnsupportedGraphError,
    UnsupportedRegionError,
)
from .folding import (
    FoldSequence,
    FoldStep,
    apply_fold_outside,
    fold_candidates,
    fold_to_stiff,
    full_config_fold,
    onion_fix,
    patch,
)
from .graphcore import Graph, GraphReport, analyze_graph, graph_from_json, graph_to_json, load_graph
from .height import LiftPattern, SlopeEstimate, height, lift, range_, slope_estimate
from .pattern import (
    Pattern,
    Region,
    count_patterns,
    enumerate_patterns,
    is_globally_allowed,
    load_pattern,
    pattern_from_json,
    pattern_to_json,
    reflect_periodize,
    sample_pattern,
    validate_pattern,
)
from .pivot import PivotChain, ReconfigReport, is_frozen_window, pivot_chain, pivot_components

__version__ = "0.1.0"
