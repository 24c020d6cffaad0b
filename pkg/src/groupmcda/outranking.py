"""Certain-information ranking: weighted sum and the outranking family.

All methods take an id-keyed matrix of values already on a commensurable
[0,1] "goodness" scale (see ``model.normalize_crisp_matrix``) and criterion
weights summing to 1.  Every produced order is total and deterministic:
scores sort descending, ties break lexicographically by alternative id.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DecisionError

Matrix = dict[str, dict[str, float]]  # alternative id -> criterion id -> value


@dataclass(frozen=True)
class PreferenceFunction:
    """Per-criterion preference degree P(d) of a value difference d.

    usual: step function, 1 for d > 0.
    linear: ramp from the indifference threshold q to the preference
    threshold p (0 <= q < p).
    """

    shape: str = "usual"
    q: float = 0.0
    p: float = 1.0

    def __post_init__(self):
        if self.shape not in ("usual", "linear"):
            raise DecisionError("BAD_THRESHOLDS", f"unknown shape {self.shape!r}")
        if self.shape == "linear" and not (0 <= self.q < self.p):
            raise DecisionError("BAD_THRESHOLDS", f"need 0 <= q < p, got q={self.q} p={self.p}")


@dataclass(frozen=True)
class FlowTable:
    positive: dict[str, float]
    negative: dict[str, float]

    @property
    def net(self) -> dict[str, float]:
        return {a: self.positive[a] - self.negative[a] for a in self.positive}

    def to_json(self) -> dict:
        return {"positive": self.positive, "negative": self.negative, "net": self.net}


@dataclass
class RankResult:
    method: str
    scores: dict[str, float]
    order: list[str]
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"method": self.method, "scores": self.scores, "order": self.order}


def order_by_scores(scores: dict[str, float]) -> list[str]:
    """Total order: score descending, alternative id ascending on ties."""
    return [a for a, _ in sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))]


def _check_dimensions(matrix: Matrix, weights: dict[str, float]) -> tuple[list[str], list[str]]:
    alts = sorted(matrix)
    crits = sorted(weights)
    for a in alts:
        if sorted(matrix[a]) != crits:
            raise DecisionError(
                "DIMENSION_MISMATCH", f"row {a} has criteria {sorted(matrix[a])}, want {crits}"
            )
    return alts, crits


def weighted_sum_rank(matrix: Matrix, weights: dict[str, float]) -> RankResult:
    """Additive utility: score(a) = sum_j w_j * r_aj."""
    alts, crits = _check_dimensions(matrix, weights)
    scores = {a: sum(weights[c] * matrix[a][c] for c in crits) for a in alts}
    return RankResult("weighted_sum", scores, order_by_scores(scores))


def pairwise_preference(d: float, f: PreferenceFunction) -> float:
    """Preference degree in [0,1] of a value difference d under f."""
    if f.shape == "usual":
        return 1.0 if d > 0 else 0.0
    if d <= f.q:
        return 0.0
    if d <= f.p:
        return (d - f.q) / (f.p - f.q)
    return 1.0


def _resolve_pref_fns(
    crits: list[str], pref_fns: dict[str, PreferenceFunction] | None
) -> dict[str, PreferenceFunction]:
    fns = dict(pref_fns or {})
    return {c: fns.get(c, PreferenceFunction()) for c in crits}


def promethee2_rank(
    matrix: Matrix,
    weights: dict[str, float],
    pref_fns: dict[str, PreferenceFunction] | None = None,
) -> RankResult:
    """Complete ranking by net outranking flow.

    pi(a,b) = sum_j w_j P_j(r_aj - r_bj); positive flow averages pi(a, .)
    over the n-1 others, negative flow averages pi(., a); net = positive
    minus negative.
    """
    alts, crits = _check_dimensions(matrix, weights)
    if len(alts) < 2:
        raise DecisionError("DIMENSION_MISMATCH", "need >= 2 alternatives")
    fns = _resolve_pref_fns(crits, pref_fns)

    pi: dict[tuple[str, str], float] = {}
    for a in alts:
        for b in alts:
            if a == b:
                continue
            pi[(a, b)] = sum(
                weights[c] * pairwise_preference(matrix[a][c] - matrix[b][c], fns[c])
                for c in crits
            )

    n = len(alts)
    positive = {a: sum(pi[(a, b)] for b in alts if b != a) / (n - 1) for a in alts}
    negative = {a: sum(pi[(b, a)] for b in alts if b != a) / (n - 1) for a in alts}
    flows = FlowTable(positive, negative)
    scores = flows.net
    return RankResult(
        "promethee2", scores, order_by_scores(scores), diagnostics={"flows": flows.to_json()}
    )


def sir_rank(
    matrix: Matrix,
    weights: dict[str, float],
    pref_fns: dict[str, PreferenceFunction] | None = None,
) -> RankResult:
    """Superiority/inferiority ranking.

    Per criterion, S_j(a) counts preference over the others and I_j(a)
    preference of the others over a; the weighted aggregates give the
    superiority flow and inferiority flow.  Ranking key is their
    difference (n-flow).
    """
    alts, crits = _check_dimensions(matrix, weights)
    if len(alts) < 2:
        raise DecisionError("DIMENSION_MISMATCH", "need >= 2 alternatives")
    fns = _resolve_pref_fns(crits, pref_fns)

    superiority = {a: 0.0 for a in alts}
    inferiority = {a: 0.0 for a in alts}
    for c in crits:
        for a in alts:
            s = sum(
                pairwise_preference(matrix[a][c] - matrix[b][c], fns[c]) for b in alts if b != a
            )
            i = sum(
                pairwise_preference(matrix[b][c] - matrix[a][c], fns[c]) for b in alts if b != a
            )
            superiority[a] += weights[c] * s
            inferiority[a] += weights[c] * i

    scores = {a: superiority[a] - inferiority[a] for a in alts}
    return RankResult(
        "sir",
        scores,
        order_by_scores(scores),
        diagnostics={"superiority": superiority, "inferiority": inferiority},
    )


def electre1_rank(
    matrix: Matrix,
    weights: dict[str, float],
    c_hat: float = 0.7,
    d_hat: float = 0.3,
) -> RankResult:
    """Outranking by concordance/discordance with net-qualification scores.

    a outranks b iff the concordant weight C(a,b) reaches c_hat and the
    worst opposing value gap D(a,b) stays within d_hat.  The raw relation
    is kept in diagnostics; scores count outranked minus outranking
    opponents so the result is always a total order.
    """
    if not (0.0 <= c_hat <= 1.0 and 0.0 <= d_hat <= 1.0):
        raise DecisionError("BAD_THRESHOLDS", f"c_hat={c_hat} d_hat={d_hat} must be in [0,1]")
    alts, crits = _check_dimensions(matrix, weights)
    if len(alts) < 2:
        raise DecisionError("DIMENSION_MISMATCH", "need >= 2 alternatives")

    concordance: dict[tuple[str, str], float] = {}
    discordance: dict[tuple[str, str], float] = {}
    outranks: dict[str, list[str]] = {a: [] for a in alts}
    for a in alts:
        for b in alts:
            if a == b:
                continue
            concordance[(a, b)] = sum(weights[c] for c in crits if matrix[a][c] >= matrix[b][c])
            discordance[(a, b)] = max(max(0.0, matrix[b][c] - matrix[a][c]) for c in crits)
            if concordance[(a, b)] >= c_hat and discordance[(a, b)] <= d_hat:
                outranks[a].append(b)

    scores = {
        a: float(len(outranks[a]) - sum(1 for b in alts if a in outranks[b])) for a in alts
    }
    return RankResult(
        "electre1",
        scores,
        order_by_scores(scores),
        diagnostics={
            "outranks": {a: sorted(bs) for a, bs in outranks.items()},
            "concordance": {f"{a}|{b}": v for (a, b), v in concordance.items()},
            "discordance": {f"{a}|{b}": v for (a, b), v in discordance.items()},
        },
    )
