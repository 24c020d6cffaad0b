"""Intuitionistic fuzzy value algebra and weighted-average group ranking.

An IFV is a pair (mu, nu) of membership and non-membership degrees with
mu + nu <= 1; the hesitation margin is pi = 1 - mu - nu.  Addition and
scaling follow the standard operator algebra:

    a + b      = (mu_a + mu_b - mu_a*mu_b, nu_a*nu_b)
    lambda * a = (1 - (1-mu)^lambda, nu^lambda)

and the weighted average of values v_k with weights w_k (sum 1) is

    IFWA = (1 - prod_k (1-mu_k)^w_k, prod_k nu_k^w_k)

Comparison uses score mu - nu first, accuracy mu + nu second.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import DecisionError
from .model import GroupProblem, NUMERIC_TOL
from .outranking import RankResult


@dataclass(frozen=True)
class IFV:
    mu: float
    nu: float

    def __post_init__(self):
        if not (0.0 <= self.mu <= 1.0 and 0.0 <= self.nu <= 1.0):
            raise DecisionError("BAD_IFV", f"mu={self.mu} nu={self.nu} outside [0,1]")
        if self.mu + self.nu > 1.0 + NUMERIC_TOL:
            raise DecisionError("BAD_IFV", f"mu+nu = {self.mu + self.nu} > 1")

    @property
    def pi(self) -> float:
        return 1.0 - self.mu - self.nu

    def to_json(self) -> dict:
        return {"mu": self.mu, "nu": self.nu}


def _clamp(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def ifv_add(a: IFV, b: IFV) -> IFV:
    return IFV(_clamp(a.mu + b.mu - a.mu * b.mu), _clamp(a.nu * b.nu))


def ifv_scale(lam: float, a: IFV) -> IFV:
    if lam <= 0:
        raise DecisionError("BAD_LAMBDA", f"lambda must be > 0, got {lam}")
    return IFV(_clamp(1.0 - (1.0 - a.mu) ** lam), _clamp(a.nu**lam))


def ifwa(values: list[IFV], weights: list[float]) -> IFV:
    """Weighted average; 0^0 counts as 1 so zero weights drop out cleanly."""
    if len(values) != len(weights) or not values:
        raise DecisionError(
            "DIMENSION_MISMATCH", f"{len(values)} values vs {len(weights)} weights"
        )
    one_minus_mu = 1.0
    nu = 1.0
    for v, w in zip(values, weights):
        one_minus_mu *= (1.0 - v.mu) ** w
        nu *= v.nu**w
    return IFV(_clamp(1.0 - one_minus_mu), _clamp(nu))


def ifv_score(a: IFV) -> float:
    return a.mu - a.nu


def ifv_accuracy(a: IFV) -> float:
    return a.mu + a.nu


_COMPARE_TOL = 1e-12  # absorbs float noise so equal-by-math scores tie


def ifv_compare(a: IFV, b: IFV) -> int:
    """1 if a ranks above b, -1 if below, 0 on full score+accuracy tie."""
    ds = ifv_score(a) - ifv_score(b)
    if abs(ds) > _COMPARE_TOL:
        return 1 if ds > 0 else -1
    dh = ifv_accuracy(a) - ifv_accuracy(b)
    if abs(dh) > _COMPARE_TOL:
        return 1 if dh > 0 else -1
    return 0


def _ifs_cell(problem: GroupProblem, maker_id: str, alt_id: str, crit_id: str) -> IFV:
    cell = problem.matrix_for(maker_id).cell(alt_id, crit_id)
    if cell is None or cell.kind != "ifs":
        raise DecisionError(
            "NON_IFS_CELL", f"maker {maker_id} cell ({alt_id},{crit_id})"
        )
    return IFV(*cell.ifs)


def aggregate_ifs_matrix(problem: GroupProblem) -> dict[str, dict[str, IFV]]:
    """Project the makers' fuzzy judgment planes onto one group plane."""
    maker_weights = [m.weight for m in problem.makers]
    out: dict[str, dict[str, IFV]] = {}
    for alt in problem.alternatives:
        out[alt.id] = {}
        for crit in problem.criteria:
            vals = [_ifs_cell(problem, m.id, alt.id, crit.id) for m in problem.makers]
            out[alt.id][crit.id] = ifwa(vals, maker_weights)
    return out


def group_criterion_weights(problem: GroupProblem) -> dict[str, float]:
    """Maker-weighted mean of the per-maker criterion weights, renormalized."""
    raw = {
        c.id: sum(
            m.weight * problem.matrix_for(m.id).criterion_weights.get(c.id, 0.0)
            for m in problem.makers
        )
        for c in problem.criteria
    }
    total = sum(raw.values())
    if total == 0:
        raise DecisionError("ALL_ZERO_WEIGHTS", "group criterion weights are all zero")
    return {c: w / total for c, w in raw.items()}


def ifs_plane_rank(grid: dict[str, dict[str, IFV]], weights: dict[str, float]) -> RankResult:
    """Rank one fuzzy judgment plane: IFWA across criteria, then compare.

    Ordering is by score, accuracy on ties, alternative id on full equality.
    """
    crit_ids = sorted(weights)
    w = [weights[c] for c in crit_ids]
    aggregated: dict[str, IFV] = {}
    for aid, row in grid.items():
        missing = [c for c in crit_ids if c not in row]
        if missing:
            raise DecisionError("DIMENSION_MISMATCH", f"row {aid} lacks {missing}")
        aggregated[aid] = ifwa([row[c] for c in crit_ids], w)

    def rank_cmp(x: str, y: str) -> int:
        by_value = ifv_compare(aggregated[y], aggregated[x])  # better value first
        return by_value if by_value else (-1 if x < y else 1)

    ordered = sorted(aggregated, key=functools.cmp_to_key(rank_cmp))
    scores = {aid: ifv_score(v) for aid, v in aggregated.items()}
    return RankResult(
        "ifwa_group",
        scores,
        ordered,
        diagnostics={
            "aggregated": {aid: v.to_json() for aid, v in aggregated.items()},
            "accuracy": {aid: ifv_accuracy(v) for aid, v in aggregated.items()},
        },
    )


def ifwa_group_rank(problem: GroupProblem) -> RankResult:
    """Two-stage IFWA: across makers per cell, then across criteria per alternative."""
    group_cells = aggregate_ifs_matrix(problem)
    omega = group_criterion_weights(problem)
    result = ifs_plane_rank(group_cells, omega)
    result.diagnostics["groupWeights"] = omega
    return result
