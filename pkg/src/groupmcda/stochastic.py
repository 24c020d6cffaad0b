"""Stochastic-cell evaluation: expected utility, dominance checks, simulation.

Distributions are finite and canonical (duplicates merged, outcomes
ascending).  Expected utility rescales outcomes to a per-criterion [0,1]
range so utilities stay commensurable across criteria; cost criteria apply
the utility to the reflected value.  Monte Carlo ranking stability draws a
deterministic substream per (seed, alternative, criterion, sample) so runs
are reproducible bit for bit and cells stay independent.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .errors import DecisionError
from .model import CellValue, Criterion, normalize_crisp_matrix
from .outranking import RankResult, order_by_scores, weighted_sum_rank

PROB_TOL = 1e-9


@dataclass(frozen=True)
class DiscreteDistribution:
    outcomes: tuple[tuple[float, float], ...]  # (value, probability), canonical

    @staticmethod
    def make(pairs) -> "DiscreteDistribution":
        """Canonicalize: merge duplicate values, drop zero mass, sort ascending."""
        merged: dict[float, float] = {}
        for v, p in pairs:
            if p < 0:
                raise DecisionError("BAD_CELL", f"negative probability {p}")
            merged[float(v)] = merged.get(float(v), 0.0) + float(p)
        outcomes = tuple((v, p) for v, p in sorted(merged.items()) if p > 0)
        if not outcomes:
            raise DecisionError("BAD_CELL", "distribution needs >= 1 outcome")
        total = sum(p for _, p in outcomes)
        if abs(total - 1.0) > PROB_TOL:
            raise DecisionError("BAD_CELL", f"probabilities sum to {total}")
        return DiscreteDistribution(outcomes)

    @staticmethod
    def degenerate(value: float) -> "DiscreteDistribution":
        return DiscreteDistribution(((float(value), 1.0),))

    def support(self) -> list[float]:
        return [v for v, _ in self.outcomes]

    def cdf(self, t: float) -> float:
        return sum(p for v, p in self.outcomes if v <= t)

    def quantile(self, u: float) -> float:
        """Smallest outcome whose CDF reaches u (inverse-CDF sampling)."""
        acc = 0.0
        for v, p in self.outcomes:
            acc += p
            if u < acc:
                return v
        return self.outcomes[-1][0]


@dataclass(frozen=True)
class UtilityFunction:
    shape: str = "linear"  # "linear" | "exponential"
    alpha: float = 1.0

    def __post_init__(self):
        if self.shape not in ("linear", "exponential"):
            raise DecisionError("BAD_UTILITY", f"unknown shape {self.shape!r}")
        if self.shape == "exponential" and self.alpha <= 0:
            raise DecisionError("BAD_UTILITY", f"alpha must be > 0, got {self.alpha}")

    def value(self, x: float) -> float:
        """Utility of a rescaled value x in [0,1]; u(0)=0 and u(1)=1."""
        if self.shape == "linear":
            return x
        return (1.0 - math.exp(-self.alpha * x)) / (1.0 - math.exp(-self.alpha))


def expected_utility(
    d: DiscreteDistribution, u: UtilityFunction, value_range: tuple[float, float]
) -> float:
    lo, hi = value_range
    if not lo < hi:
        raise DecisionError("BAD_RANGE", f"need lo < hi, got ({lo}, {hi})")
    total = 0.0
    for v, p in d.outcomes:
        if v < lo - PROB_TOL or v > hi + PROB_TOL:
            raise DecisionError("OUT_OF_RANGE", f"outcome {v} outside [{lo}, {hi}]")
        total += p * u.value((v - lo) / (hi - lo))
    return total


def fsd_check(a: DiscreteDistribution, b: DiscreteDistribution) -> str:
    """First-order stochastic dominance over the merged support.

    Returns "a_dominates", "b_dominates", "none", or "equal".
    """
    if a.outcomes == b.outcomes:
        return "equal"
    support = sorted(set(a.support()) | set(b.support()))
    a_leq = all(a.cdf(t) <= b.cdf(t) + PROB_TOL for t in support)
    b_leq = all(b.cdf(t) <= a.cdf(t) + PROB_TOL for t in support)
    if a_leq and not b_leq:
        return "a_dominates"
    if b_leq and not a_leq:
        return "b_dominates"
    return "none"


def _cell_dist(cell: CellValue, where: str) -> DiscreteDistribution:
    if cell.kind == "crisp":
        return DiscreteDistribution.degenerate(cell.crisp)
    if cell.kind == "dist":
        return DiscreteDistribution.make(cell.dist)
    raise DecisionError("NON_STOCHASTIC_CELL", where)


def distribution_grid(
    cells: dict[str, dict[str, CellValue]]
) -> dict[str, dict[str, DiscreteDistribution]]:
    return {
        aid: {cid: _cell_dist(cell, f"({aid},{cid})") for cid, cell in row.items()}
        for aid, row in cells.items()
    }


def eu_rank(
    cells: dict[str, dict[str, CellValue]],
    criteria: list[Criterion] | tuple[Criterion, ...],
    weights: dict[str, float],
    utility: UtilityFunction | None = None,
) -> RankResult:
    """Reduce every cell to its expected utility, then rank by weighted sum.

    Per criterion the rescaling range is the observed min/max of all outcome
    support; a constant support maps to utility 0.5 to match the crisp
    normalization convention.
    """
    utility = utility or UtilityFunction()
    grid = distribution_grid(cells)
    reduced: dict[str, dict[str, float]] = {aid: {} for aid in grid}
    for crit in criteria:
        column = [(aid, row[crit.id]) for aid, row in grid.items() if crit.id in row]
        if not column:
            continue
        values = [v for _, d in column for v in d.support()]
        lo, hi = min(values), max(values)
        for aid, d in column:
            if hi == lo:
                reduced[aid][crit.id] = 0.5
                continue
            eu = 0.0
            for v, p in d.outcomes:
                x = (v - lo) / (hi - lo)
                if crit.direction == "cost":
                    x = 1.0 - x
                eu += p * utility.value(x)
            reduced[aid][crit.id] = eu
    result = weighted_sum_rank(reduced, weights)
    return RankResult(
        "expected_utility",
        result.scores,
        result.order,
        diagnostics={"utilities": reduced, "utility": {"shape": utility.shape, "alpha": utility.alpha}},
    )


def fsd_rank(
    cells: dict[str, dict[str, CellValue]],
    criteria: list[Criterion] | tuple[Criterion, ...],
    weights: dict[str, float],
) -> RankResult:
    """Net weighted count of pairwise first-order dominance per criterion.

    Cost criteria invert the dominance direction (lower outcomes dominate).
    """
    grid = distribution_grid(cells)
    alts = sorted(grid)
    scores = {a: 0.0 for a in alts}
    relation: dict[str, list[str]] = {a: [] for a in alts}
    for crit in criteria:
        for a in alts:
            for b in alts:
                if a == b:
                    continue
                verdict = fsd_check(grid[a][crit.id], grid[b][crit.id])
                wins = (verdict == "a_dominates") if crit.direction != "cost" else (
                    verdict == "b_dominates"
                )
                if wins:
                    scores[a] += weights[crit.id]
                    scores[b] -= weights[crit.id]
                    relation[a].append(f"{b}@{crit.id}")
    return RankResult(
        "fsd", scores, order_by_scores(scores), diagnostics={"dominates": relation}
    )


def _substream_uniform(seed: int, alt_id: str, crit_id: str, sample: int) -> float:
    """Deterministic uniform in [0,1) derived from a stable per-cell substream."""
    key = f"{seed}|{alt_id}|{crit_id}|{sample}".encode()
    digest = hashlib.sha256(key).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def monte_carlo_stability(
    cells: dict[str, dict[str, CellValue]],
    criteria: list[Criterion] | tuple[Criterion, ...],
    weights: dict[str, float],
    samples: int = 10_000,
    seed: int = 0,
) -> dict[str, list[float]]:
    """Rank-position frequencies under independent resampling of every cell.

    Each realization is min-max normalized and ranked by weighted sum;
    the returned row per alternative holds the frequency of finishing in
    each position and sums to 1.
    """
    if samples < 1:
        raise DecisionError("BAD_SAMPLES", f"samples must be >= 1, got {samples}")
    grid = distribution_grid(cells)
    alts = sorted(grid)
    n = len(alts)
    tally = {a: [0] * n for a in alts}
    for s in range(samples):
        realization = {
            a: {
                cid: d.quantile(_substream_uniform(seed, a, cid, s))
                for cid, d in grid[a].items()
            }
            for a in alts
        }
        normalized = normalize_crisp_matrix(realization, criteria)
        order = weighted_sum_rank(normalized, weights).order
        for pos, a in enumerate(order):
            tally[a][pos] += 1
    return {a: [c / samples for c in counts] for a, counts in tally.items()}


def monte_carlo_rank(
    cells: dict[str, dict[str, CellValue]],
    criteria: list[Criterion] | tuple[Criterion, ...],
    weights: dict[str, float],
    samples: int = 10_000,
    seed: int = 0,
) -> RankResult:
    """Total order from the stability matrix: higher expected position wins."""
    freq = monte_carlo_stability(cells, criteria, weights, samples=samples, seed=seed)
    n = len(freq)
    scores = {
        a: float(n) - sum((pos + 1) * f for pos, f in enumerate(row))
        for a, row in freq.items()
    }
    return RankResult(
        "monte_carlo_stability",
        scores,
        order_by_scores(scores),
        diagnostics={"frequencies": freq, "samples": samples, "seed": seed},
    )
