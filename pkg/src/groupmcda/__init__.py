"""Group multi-criteria decision engine.

Classifies a group decision problem's uncertainty type, runs the matching
ranking methods (weighted sum, outranking flows, fuzzy weighted averaging,
expected utility, dominance-based rough rules), aggregates individual
judgments into a group result, measures consensus, and supports what-if
weight negotiation.  Sessions and reusable schemes persist in a file-backed
knowledge store; a CLI and HTTP session service expose the whole engine.
"""

from .environment import EnvironmentReport, classify_problem, recommend_methods
from .errors import DecisionError, SchemaError
from .fuzzy import IFV, ifv_accuracy, ifv_add, ifv_compare, ifv_scale, ifv_score, ifwa, ifwa_group_rank
from .model import (
    Alternative,
    CellValue,
    Criterion,
    DecisionMaker,
    DecisionMatrix,
    GroupProblem,
    ValidationReport,
    normalize_crisp_matrix,
    normalize_weights,
    validate_problem,
)
from .outranking import (
    FlowTable,
    PreferenceFunction,
    RankResult,
    electre1_rank,
    pairwise_preference,
    promethee2_rank,
    sir_rank,
    weighted_sum_rank,
)
from .pipeline import (
    ConsensusReport,
    MethodOptions,
    PipelineOptions,
    PipelineReport,
    StageReport,
    WhatIfResult,
    aggregate_group_matrix,
    consensus,
    kendall_distance,
    min_weight_flip,
    run_method,
    run_pipeline,
    whatif_weights,
)
from .rough import (
    Approximation,
    DecisionRule,
    SortingTable,
    classify_with_rules,
    dominance_cones,
    induce_rules,
    quality_gamma,
    union_approximations,
)
from .schema import ParsedProblem, load_problem_file, parse_problem_document, serialize_problem
from .stochastic import (
    DiscreteDistribution,
    UtilityFunction,
    eu_rank,
    expected_utility,
    fsd_check,
    monte_carlo_stability,
)
from .store import KnowledgeStore, SchemeRecord, SessionRecord, scheme_descriptor

__all__ = [name for name in dir() if not name.startswith("_")]
