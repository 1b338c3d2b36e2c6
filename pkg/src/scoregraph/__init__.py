"""Pairwise-judgment elicitation, constraint-graph unification, and score synthesis."""

from .graph import (
    ConstraintGraph,
    Degree,
    Edge,
    EquivalencySet,
    Relation,
    longest_representative_path,
    reduce_redundant_edges,
)
from .encoding import (
    Answer,
    Session,
    SessionOptions,
    WeakOrderOracle,
    drive_session,
    replay,
    start_session,
)
from .unification import (
    UnificationReport,
    VoteTally,
    adjust_votes,
    assign_unified_degrees,
    enumerate_pairs,
    tally_votes,
    unify,
    unify_with_degrees,
)
from .scoring import (
    FeasibilityCurve,
    ScoreAssignment,
    ScoringConfig,
    assign_max_scores,
    assign_min_scores,
    feasible_distances,
    generate_scores,
    peg_and_regenerate,
    validate_rational,
)
from .prioritization import RankedSet, format_ranked_sets, prioritize
from .metrics import ordering_distance, pairwise_inconsistency, random_baseline

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "ConstraintGraph",
    "Degree",
    "Edge",
    "EquivalencySet",
    "FeasibilityCurve",
    "RankedSet",
    "Relation",
    "ScoreAssignment",
    "ScoringConfig",
    "Session",
    "SessionOptions",
    "UnificationReport",
    "VoteTally",
    "WeakOrderOracle",
    "adjust_votes",
    "assign_max_scores",
    "assign_min_scores",
    "assign_unified_degrees",
    "drive_session",
    "enumerate_pairs",
    "feasible_distances",
    "format_ranked_sets",
    "generate_scores",
    "longest_representative_path",
    "ordering_distance",
    "pairwise_inconsistency",
    "peg_and_regenerate",
    "prioritize",
    "random_baseline",
    "reduce_redundant_edges",
    "replay",
    "start_session",
    "tally_votes",
    "unify",
    "unify_with_degrees",
    "validate_rational",
]
