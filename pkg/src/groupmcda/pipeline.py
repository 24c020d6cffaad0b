"""Group aggregation, consensus measurement, what-if negotiation, orchestration.

The group projection collapses every maker's judgment plane onto a single
group plane: crisp cells average under maker weights, fuzzy cells aggregate
with the weighted average operator, distribution cells mix.  Consensus
compares each maker's individual ranking against the group ranking with a
normalized pairwise-disagreement distance, and the what-if operations probe
how the group ranking responds to criterion-weight changes.

Ranking methods applied through this module expect crisp values already on
a commensurable [0,1] scale; cost criteria are reflected (v -> 1-v) before
a method runs.  Raw-scale inputs belong in ``normalize_crisp_matrix`` or in
the expected-utility reduction, which rescales internally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import fuzzy, outranking, rough, stochastic
from .environment import EnvironmentReport, classify_problem, recommend_methods
from .errors import DecisionError
from .fuzzy import IFV, group_criterion_weights, ifwa
from .model import (
    CellGrid,
    CellValue,
    DecisionMatrix,
    GroupProblem,
    validate_problem,
)
from .outranking import PreferenceFunction, RankResult
from .store import KnowledgeStore, scheme_descriptor
from .stochastic import DiscreteDistribution, UtilityFunction

STAGES = ("environment", "problem", "group", "scheme", "conflict", "coordination")

METHOD_IDS = (
    "weighted_sum",
    "promethee2",
    "sir",
    "electre1",
    "expected_utility",
    "fsd",
    "monte_carlo_stability",
    "ifwa_group",
    "drsa",
)


@dataclass
class MethodOptions:
    seed: int = 0
    samples: int = 1000
    utility: UtilityFunction = field(default_factory=UtilityFunction)
    pref_fns: dict[str, PreferenceFunction] | None = None
    electre_c: float = 0.7
    electre_d: float = 0.3
    max_conditions: int = 3


@dataclass(frozen=True)
class StageReport:
    stage: str
    status: str  # ok | warning | error
    payload: dict

    def to_json(self) -> dict:
        return {"stage": self.stage, "status": self.status, "payload": self.payload}


@dataclass
class PipelineReport:
    stages: list[StageReport]
    result: RankResult | None = None
    error: str | None = None

    def to_json(self) -> dict:
        doc = {"stages": [s.to_json() for s in self.stages]}
        if self.result is not None:
            doc["result"] = self.result.to_json()
        if self.error is not None:
            doc["error"] = self.error
        return doc


@dataclass
class ConsensusReport:
    per_maker: dict[str, float]
    consensus_index: float
    conflicts: list[dict]  # {"maker", "criterion", "severity"}

    def to_json(self) -> dict:
        return {
            "perMaker": self.per_maker,
            "consensusIndex": self.consensus_index,
            "conflicts": self.conflicts,
        }


@dataclass
class WhatIfResult:
    adjusted_weights: dict[str, float]
    new_order: list[str]
    flipped: bool
    baseline_order: list[str]
    min_flip_delta: float | None = None

    def to_json(self) -> dict:
        doc = {
            "adjustedWeights": self.adjusted_weights,
            "newOrder": self.new_order,
            "flipped": self.flipped,
            "baselineOrder": self.baseline_order,
        }
        if self.min_flip_delta is not None:
            doc["minFlipDelta"] = self.min_flip_delta
        return doc


# -- group projection -----------------------------------------------------


def aggregate_group_matrix(problem: GroupProblem) -> DecisionMatrix:
    """Project all makers' planes onto one group plane.

    Cell kinds must agree across makers at each position: crisp cells take
    the maker-weighted mean, fuzzy cells the weighted average operator,
    distribution cells the probability mixture.
    """
    makers = problem.makers
    cells: CellGrid = {}
    for alt in problem.alternatives:
        cells[alt.id] = {}
        for crit in problem.criteria:
            present = [
                (m.weight, problem.matrix_for(m.id).cell(alt.id, crit.id)) for m in makers
            ]
            present = [(w, c) for w, c in present if c is not None]
            if not present:
                continue
            kinds = {c.kind for _, c in present}
            if len(kinds) > 1:
                raise DecisionError("MIXED_CELL_KINDS", f"({alt.id},{crit.id}): {sorted(kinds)}")
            total_w = sum(w for w, _ in present)
            if total_w == 0:
                raise DecisionError("ALL_ZERO_WEIGHTS", f"({alt.id},{crit.id})")
            weights = [w / total_w for w, _ in present]
            kind = kinds.pop()
            if kind == "crisp":
                value = sum(w * c.crisp for w, (_, c) in zip(weights, present))
                cells[alt.id][crit.id] = CellValue.of_crisp(value)
            elif kind == "ifs":
                agg = ifwa([IFV(*c.ifs) for _, c in present], weights)
                cells[alt.id][crit.id] = CellValue.of_ifs(agg.mu, agg.nu)
            else:
                mixture: list[tuple[float, float]] = []
                for w, (_, c) in zip(weights, present):
                    mixture.extend((v, w * p) for v, p in c.dist)
                canonical = DiscreteDistribution.make(mixture)
                cells[alt.id][crit.id] = CellValue.of_dist(canonical.outcomes)
    return DecisionMatrix(
        maker="__group__",
        cells=cells,
        criterion_weights=group_criterion_weights(problem),
    )


# -- single-plane method dispatch ------------------------------------------


def _classic_matrix(problem: GroupProblem, cells: CellGrid) -> outranking.Matrix:
    """Crisp cells as a method matrix: [0,1] enforced, cost reflected."""
    directions = {c.id: c.direction for c in problem.criteria}
    out: outranking.Matrix = {}
    for aid, row in cells.items():
        out[aid] = {}
        for cid, cell in row.items():
            if cell.kind != "crisp":
                raise DecisionError("NON_CRISP_CELL", f"({aid},{cid}) has kind {cell.kind}")
            v = cell.crisp
            if not -1e-9 <= v <= 1.0 + 1e-9:
                raise DecisionError(
                    "METHOD_INAPPLICABLE",
                    f"cell ({aid},{cid}) value {v} outside [0,1]; normalize first",
                )
            out[aid][cid] = 1.0 - v if directions.get(cid) == "cost" else v
    return out


def _drsa_rank(
    problem: GroupProblem,
    cells: CellGrid,
    table: rough.SortingTable,
    options: MethodOptions,
) -> RankResult:
    """Rank alternatives by the class interval their values support.

    Rules are induced from the sorting table; each alternative is classified
    from its crisp values on the table's criteria and scored by the interval
    midpoint.
    """
    rules = rough.induce_rules(table, max_conditions=max(options.max_conditions, len(table.criteria)))
    gamma = rough.quality_gamma(table)
    intervals: dict[str, tuple[int, int]] = {}
    for aid, row in cells.items():
        values: dict[str, float] = {}
        for crit in table.criteria:
            cell = row.get(crit.id)
            if cell is None or cell.kind != "crisp":
                raise DecisionError(
                    "METHOD_INAPPLICABLE",
                    f"alternative {aid} lacks a crisp value on {crit.id}",
                )
            values[crit.id] = cell.crisp
        intervals[aid] = rough.classify_with_rules(rules, values, table.num_classes)
    scores = {aid: (lo + hi) / 2.0 for aid, (lo, hi) in intervals.items()}
    return RankResult(
        "drsa",
        scores,
        outranking.order_by_scores(scores),
        diagnostics={
            "intervals": {aid: list(iv) for aid, iv in intervals.items()},
            "gamma": gamma,
            "ruleCount": len(rules),
        },
    )


def run_method(
    method: str,
    problem: GroupProblem,
    cells: CellGrid,
    weights: dict[str, float],
    options: MethodOptions | None = None,
    sorting: rough.SortingTable | None = None,
) -> RankResult:
    """Run one ranking method over a single decision plane."""
    options = options or MethodOptions()
    if method not in METHOD_IDS:
        raise DecisionError("UNKNOWN_METHOD", method)

    if method == "weighted_sum":
        return outranking.weighted_sum_rank(_classic_matrix(problem, cells), weights)
    if method == "promethee2":
        return outranking.promethee2_rank(
            _classic_matrix(problem, cells), weights, options.pref_fns
        )
    if method == "sir":
        return outranking.sir_rank(_classic_matrix(problem, cells), weights, options.pref_fns)
    if method == "electre1":
        return outranking.electre1_rank(
            _classic_matrix(problem, cells), weights, options.electre_c, options.electre_d
        )
    if method == "expected_utility":
        return stochastic.eu_rank(cells, problem.criteria, weights, options.utility)
    if method == "fsd":
        return stochastic.fsd_rank(cells, problem.criteria, weights)
    if method == "monte_carlo_stability":
        return stochastic.monte_carlo_rank(
            cells, problem.criteria, weights, samples=options.samples, seed=options.seed
        )
    if method == "ifwa_group":
        grid: dict[str, dict[str, IFV]] = {}
        for aid, row in cells.items():
            grid[aid] = {}
            for cid, cell in row.items():
                if cell.kind != "ifs":
                    raise DecisionError("NON_IFS_CELL", f"({aid},{cid}) has kind {cell.kind}")
                grid[aid][cid] = IFV(*cell.ifs)
        return fuzzy.ifs_plane_rank(grid, weights)
    # drsa
    if sorting is None:
        raise DecisionError("METHOD_INAPPLICABLE", "drsa needs a sorting table")
    return _drsa_rank(problem, cells, sorting, options)


# -- consensus and what-if --------------------------------------------------


def kendall_distance(order_a: list[str], order_b: list[str]) -> float:
    """Discordant pair fraction between two strict total orders."""
    if sorted(order_a) != sorted(order_b) or len(set(order_a)) != len(order_a):
        raise DecisionError("NOT_SAME_SET", f"{order_a} vs {order_b}")
    n = len(order_a)
    if n < 2:
        raise DecisionError("NOT_SAME_SET", "need >= 2 items")
    pos_a = {x: i for i, x in enumerate(order_a)}
    pos_b = {x: i for i, x in enumerate(order_b)}
    discordant = 0
    for x, y in itertools.combinations(order_a, 2):
        if (pos_a[x] - pos_a[y]) * (pos_b[x] - pos_b[y]) < 0:
            discordant += 1
    return discordant / (n * (n - 1) / 2)


def retarget_weights(
    weights: dict[str, float], criterion: str, delta: float
) -> dict[str, float]:
    """Set one criterion's weight to w+delta and rescale the rest to sum 1."""
    if criterion not in weights:
        raise DecisionError("UNKNOWN_CRITERION", criterion)
    target = weights[criterion] + delta
    if not -1e-12 <= target <= 1.0 + 1e-12:
        raise DecisionError("WEIGHT_OUT_OF_RANGE", f"{criterion} -> {target}")
    target = min(max(target, 0.0), 1.0)
    others = {c: w for c, w in weights.items() if c != criterion}
    if not others:
        return {criterion: 1.0}
    remaining = 1.0 - target
    others_sum = sum(others.values())
    if others_sum > 0:
        scaled = {c: w * remaining / others_sum for c, w in others.items()}
    else:
        scaled = {c: remaining / len(others) for c in others}
    scaled[criterion] = target
    return {c: scaled[c] for c in weights}


def _individual_rank(
    problem: GroupProblem,
    maker_id: str,
    method: str,
    options: MethodOptions,
    sorting: rough.SortingTable | None,
) -> RankResult:
    matrix = problem.matrix_for(maker_id)
    return run_method(method, problem, matrix.cells, matrix.criterion_weights, options, sorting)


def consensus(
    problem: GroupProblem,
    method: str,
    options: MethodOptions | None = None,
    sorting: rough.SortingTable | None = None,
    conflict_threshold: float = 0.5,
    probe_delta: float = 0.1,
) -> ConsensusReport:
    """Per-maker agreement with the group ranking plus conflict annotations.

    A maker whose distance exceeds the threshold is flagged, annotated with
    the criterion whose group-weight perturbation (+/- probe_delta) most
    reduces that maker's distance.
    """
    options = options or MethodOptions()
    group = aggregate_group_matrix(problem)
    group_rank = run_method(method, problem, group.cells, group.criterion_weights, options, sorting)

    per_maker: dict[str, float] = {}
    individual_orders: dict[str, list[str]] = {}
    for maker in problem.makers:
        individual = _individual_rank(problem, maker.id, method, options, sorting)
        individual_orders[maker.id] = individual.order
        per_maker[maker.id] = kendall_distance(individual.order, group_rank.order)

    index = 1.0 - sum(m.weight * per_maker[m.id] for m in problem.makers)

    conflicts: list[dict] = []
    for maker in problem.makers:
        distance = per_maker[maker.id]
        if distance <= conflict_threshold:
            continue
        best_crit = None
        best_reduction = float("-inf")
        for crit in sorted(group.criterion_weights):
            for delta in (probe_delta, -probe_delta):
                try:
                    adjusted = retarget_weights(group.criterion_weights, crit, delta)
                except DecisionError:
                    continue
                probe_rank = run_method(method, problem, group.cells, adjusted, options, sorting)
                reduction = distance - kendall_distance(
                    individual_orders[maker.id], probe_rank.order
                )
                if reduction > best_reduction:
                    best_reduction = reduction
                    best_crit = crit
        conflicts.append(
            {"maker": maker.id, "criterion": best_crit, "severity": distance}
        )

    return ConsensusReport(per_maker=per_maker, consensus_index=index, conflicts=conflicts)


def whatif_weights(
    problem: GroupProblem,
    method: str,
    criterion: str,
    delta: float,
    options: MethodOptions | None = None,
    sorting: rough.SortingTable | None = None,
) -> WhatIfResult:
    """Re-rank the group plane after nudging one criterion's group weight."""
    options = options or MethodOptions()
    group = aggregate_group_matrix(problem)
    baseline = run_method(method, problem, group.cells, group.criterion_weights, options, sorting)
    adjusted = retarget_weights(group.criterion_weights, criterion, delta)
    rerank = run_method(method, problem, group.cells, adjusted, options, sorting)
    return WhatIfResult(
        adjusted_weights=adjusted,
        new_order=rerank.order,
        flipped=rerank.order[0] != baseline.order[0],
        baseline_order=baseline.order,
    )


def min_weight_flip(
    problem: GroupProblem,
    method: str,
    criterion: str,
    options: MethodOptions | None = None,
    sorting: rough.SortingTable | None = None,
    resolution: float = 1e-4,
) -> float | None:
    """Smallest |delta| that changes the top alternative; None if impossible.

    Each side of zero is scanned for a flipping delta, then the boundary is
    bisected down to the resolution.
    """
    options = options or MethodOptions()
    group = aggregate_group_matrix(problem)
    if criterion not in group.criterion_weights:
        raise DecisionError("UNKNOWN_CRITERION", criterion)
    baseline = run_method(method, problem, group.cells, group.criterion_weights, options, sorting)
    top = baseline.order[0]
    w = group.criterion_weights[criterion]

    def flips(delta: float) -> bool:
        adjusted = retarget_weights(group.criterion_weights, criterion, delta)
        rerank = run_method(method, problem, group.cells, adjusted, options, sorting)
        return rerank.order[0] != top

    best: float | None = None
    for extreme in (1.0 - w, -w):
        if abs(extreme) < resolution:
            continue
        flip_at = None
        if flips(extreme):
            flip_at = extreme
        else:
            steps = 32
            for i in range(1, steps):
                candidate = extreme * i / steps
                if flips(candidate):
                    flip_at = candidate
                    break
        if flip_at is None:
            continue
        lo, hi = 0.0, flip_at  # flips(hi) holds, flips(lo) does not
        while abs(hi - lo) > resolution:
            mid = (lo + hi) / 2.0
            if flips(mid):
                hi = mid
            else:
                lo = mid
        if best is None or abs(hi) < abs(best):
            best = hi
    return best


# -- six-stage orchestration -------------------------------------------------


@dataclass
class PipelineOptions:
    method: str | None = None  # override the dispatch-recommended method
    seed: int = 0
    samples: int = 1000
    store: KnowledgeStore | None = None
    retrieval_k: int = 3
    conflict_threshold: float = 0.5
    probe_delta: float = 0.1

    def method_options(self) -> MethodOptions:
        return MethodOptions(seed=self.seed, samples=self.samples)


def run_pipeline(
    problem: GroupProblem,
    sorting: rough.SortingTable | None = None,
    declared_flags: tuple[str, ...] = (),
    options: PipelineOptions | None = None,
) -> PipelineReport:
    """Run the six decision-process stages and the final group ranking.

    Stage order: environment, problem, group, scheme, conflict,
    coordination.  A strict-validation failure stops after stage 2; an
    inapplicable method stops after the stage that hit it.
    """
    options = options or PipelineOptions()
    mopts = options.method_options()
    stages: list[StageReport] = []

    env = classify_problem(problem, sorting, declared_flags)
    stages.append(StageReport("environment", "ok", env.to_json()))

    validation = validate_problem(problem, strict=True)
    val_status = "error" if validation.errors() else ("warning" if validation.warnings() else "ok")
    stages.append(StageReport("problem", val_status, validation.to_json()))
    if val_status == "error":
        return PipelineReport(stages=stages, error="VALIDATION_FAILED")

    weight_sum = sum(m.weight for m in problem.makers)
    stages.append(
        StageReport(
            "group",
            "ok",
            {
                "makers": [{"id": m.id, "weight": m.weight} for m in problem.makers],
                "weightSum": weight_sum,
                "note": "group analysis reduced to maker-weight audit",
            },
        )
    )

    methods = [options.method] if options.method else recommend_methods(env)
    if options.method and options.method not in METHOD_IDS:
        return PipelineReport(stages=stages, error="METHOD_INAPPLICABLE")
    group = aggregate_group_matrix(problem)
    candidates = []
    chosen_result: RankResult | None = None
    for mid in methods:
        try:
            result = run_method(mid, problem, group.cells, group.criterion_weights, mopts, sorting)
            candidates.append(
                {"method": mid, "order": result.order, "scores": result.scores}
            )
            if mid == methods[0]:
                chosen_result = result
        except DecisionError as exc:
            candidates.append({"method": mid, "error": exc.code})

    similar = []
    if options.store is not None:
        descriptor = scheme_descriptor(
            len(problem.alternatives),
            len(problem.criteria),
            len(problem.makers),
            env.uncertainty_class,
        )
        for record, sim in options.store.retrieve_similar_schemes(
            descriptor, options.retrieval_k
        ):
            similar.append({"id": record.id, "method": record.method, "similarity": sim})
    stages.append(
        StageReport(
            "scheme",
            "ok" if all("error" not in c for c in candidates) else "warning",
            {"methods": methods, "candidates": candidates, "similarSchemes": similar},
        )
    )

    if chosen_result is None:
        stages.append(
            StageReport("conflict", "error", {"method": methods[0], "error": "METHOD_INAPPLICABLE"})
        )
        return PipelineReport(stages=stages, error="METHOD_INAPPLICABLE")

    try:
        conflict_report = consensus(
            problem,
            methods[0],
            mopts,
            sorting,
            conflict_threshold=options.conflict_threshold,
            probe_delta=options.probe_delta,
        )
    except DecisionError as exc:
        stages.append(StageReport("conflict", "error", {"error": exc.code}))
        return PipelineReport(stages=stages, error="METHOD_INAPPLICABLE")
    stages.append(
        StageReport(
            "conflict",
            "ok" if not conflict_report.conflicts else "warning",
            conflict_report.to_json(),
        )
    )

    stages.append(
        StageReport(
            "coordination",
            "ok",
            {
                "method": chosen_result.method,
                "scores": chosen_result.scores,
                "order": chosen_result.order,
                "diagnostics": chosen_result.diagnostics,
            },
        )
    )
    report = PipelineReport(stages=stages, result=chosen_result)

    if options.store is not None:
        descriptor = scheme_descriptor(
            len(problem.alternatives),
            len(problem.criteria),
            len(problem.makers),
            env.uncertainty_class,
        )
        scheme_id = f"scheme-{problem.id}-{len(options.store.list_schemes())}"
        options.store.add_scheme(scheme_id, descriptor, chosen_result.method, chosen_result.order)
        options.store.emit_scheme(scheme_id)

    return report
