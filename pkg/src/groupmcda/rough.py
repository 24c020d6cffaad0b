"""Dominance-based rough analysis of an example-based sorting table.

Objects carry values on preference-ordered criteria and an assigned class
in 1..m (higher is better).  Upward/downward class unions are approximated
through dominance cones; the quality index gamma is the fraction of objects
outside every boundary.  Certain decision rules are induced by exhaustive
search over observed-value thresholds, which is verifiable by brute force
at the table sizes this engine targets (tens of objects).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DecisionError
from .model import Criterion


@dataclass(frozen=True)
class SortingTable:
    objects: tuple[str, ...]
    criteria: tuple[Criterion, ...]
    values: dict[str, dict[str, float]]  # object id -> criterion id -> value
    class_assignment: dict[str, int]  # object id -> class index in 1..num_classes
    num_classes: int = 0  # declared m; defaults to the max assigned class

    def __post_init__(self):
        if self.num_classes == 0:
            object.__setattr__(
                self, "num_classes", max(self.class_assignment.values(), default=0)
            )

    def validate(self) -> None:
        m = self.num_classes
        if m < 2:
            raise DecisionError("BAD_SORTING_TABLE", "need >= 2 classes")
        for obj in self.objects:
            if obj not in self.class_assignment:
                raise DecisionError("BAD_SORTING_TABLE", f"object {obj} has no class")
            if not 1 <= self.class_assignment[obj] <= m:
                raise DecisionError("BAD_SORTING_TABLE", f"class of {obj} outside 1..{m}")
            for c in self.criteria:
                if c.id not in self.values.get(obj, {}):
                    raise DecisionError("BAD_SORTING_TABLE", f"missing value ({obj},{c.id})")


@dataclass(frozen=True)
class Approximation:
    direction: str  # "atLeast" | "atMost"
    class_index: int
    lower: frozenset[str]
    upper: frozenset[str]

    @property
    def boundary(self) -> frozenset[str]:
        return self.upper - self.lower

    def to_json(self) -> dict:
        return {
            "target": {"direction": self.direction, "classIndex": self.class_index},
            "lower": sorted(self.lower),
            "upper": sorted(self.upper),
            "boundary": sorted(self.boundary),
        }


@dataclass(frozen=True)
class RuleCondition:
    criterion: str
    relation: str  # ">=" | "<="
    threshold: float

    def matches(self, values: dict[str, float]) -> bool:
        v = values.get(self.criterion)
        if v is None:
            return False
        return v >= self.threshold if self.relation == ">=" else v <= self.threshold

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "relation": self.relation, "threshold": self.threshold}


@dataclass(frozen=True)
class DecisionRule:
    kind: str  # "atLeast" | "atMost"
    conditions: tuple[RuleCondition, ...]
    class_index: int
    certain: bool = True

    def matches(self, values: dict[str, float]) -> bool:
        return all(c.matches(values) for c in self.conditions)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "conditions": [c.to_json() for c in self.conditions],
            "classIndex": self.class_index,
            "certain": self.certain,
        }


def _weakly_better(table: SortingTable, y: str, x: str) -> bool:
    """y at least as good as x on every criterion, direction-adjusted."""
    for c in table.criteria:
        vy, vx = table.values[y][c.id], table.values[x][c.id]
        if c.direction == "cost":
            if vy > vx:
                return False
        elif vy < vx:
            return False
    return True


def dominance_cones(table: SortingTable, obj: str) -> tuple[set[str], set[str]]:
    """(dominating set D+, dominated set D-) of an object; both contain it."""
    if obj not in table.objects:
        raise DecisionError("UNKNOWN_OBJECT", obj)
    d_plus = {y for y in table.objects if _weakly_better(table, y, obj)}
    d_minus = {y for y in table.objects if _weakly_better(table, obj, y)}
    return d_plus, d_minus


def union_approximations(table: SortingTable) -> list[Approximation]:
    """Approximations of every upward union (t=2..m) and downward union (t=1..m-1)."""
    table.validate()
    m = table.num_classes
    cones = {x: dominance_cones(table, x) for x in table.objects}
    out: list[Approximation] = []
    for t in range(2, m + 1):
        union = {x for x in table.objects if table.class_assignment[x] >= t}
        lower = {x for x in table.objects if cones[x][0] <= union}
        upper = {x for x in table.objects if cones[x][1] & union}
        out.append(Approximation("atLeast", t, frozenset(lower), frozenset(upper)))
    for t in range(1, m):
        union = {x for x in table.objects if table.class_assignment[x] <= t}
        lower = {x for x in table.objects if cones[x][1] <= union}
        upper = {x for x in table.objects if cones[x][0] & union}
        out.append(Approximation("atMost", t, frozenset(lower), frozenset(upper)))
    return out


def quality_gamma(table: SortingTable) -> float:
    """Fraction of objects in no boundary region; 1 means dominance-consistent."""
    boundary: set[str] = set()
    for approx in union_approximations(table):
        boundary |= approx.boundary
    return (len(table.objects) - len(boundary)) / len(table.objects)


def _condition_relation(kind: str, crit: Criterion) -> str:
    if kind == "atLeast":
        return "<=" if crit.direction == "cost" else ">="
    return ">=" if crit.direction == "cost" else "<="


def induce_rules(table: SortingTable, max_conditions: int = 3) -> list[DecisionRule]:
    """Exhaustive minimal certain rules from every lower approximation.

    Candidates combine observed-value thresholds over up to max_conditions
    criteria, scanned in increasing size with a canonical tie order; a
    candidate is kept iff it matches >= 1 object, matches only objects of
    the target lower approximation, and its matched set is not contained
    in an already kept rule's matched set.
    """
    if max_conditions < 1:
        raise DecisionError("BAD_RULE_LIMIT", "max_conditions must be >= 1")
    table.validate()
    approximations = union_approximations(table)
    crits = sorted(table.criteria, key=lambda c: c.id)
    kept: list[DecisionRule] = []
    for approx in approximations:
        lower = approx.lower
        if not lower:
            continue
        kept_matches: list[frozenset[str]] = []
        for size in range(1, min(max_conditions, len(crits)) + 1):
            for combo in itertools.combinations(crits, size):
                threshold_sets = []
                for crit in combo:
                    observed = sorted({table.values[x][crit.id] for x in table.objects})
                    threshold_sets.append(observed)
                for thresholds in itertools.product(*threshold_sets):
                    conditions = tuple(
                        RuleCondition(crit.id, _condition_relation(approx.direction, crit), th)
                        for crit, th in zip(combo, thresholds)
                    )
                    matched = frozenset(
                        x for x in table.objects
                        if all(c.matches(table.values[x]) for c in conditions)
                    )
                    if not matched or not matched <= lower:
                        continue
                    if any(matched <= prev for prev in kept_matches):
                        continue
                    kept.append(
                        DecisionRule(approx.direction, conditions, approx.class_index)
                    )
                    kept_matches.append(matched)
    return kept


def classify_with_rules(
    rules: list[DecisionRule], values: dict[str, float], num_classes: int
) -> tuple[int, int]:
    """Class interval (lo, hi) supported by the matching rules.

    No matching atLeast rule leaves lo at 1; no matching atMost rule
    leaves hi at num_classes.
    """
    lo, hi = 1, num_classes
    for rule in rules:
        if not rule.matches(values):
            continue
        if rule.kind == "atLeast":
            lo = max(lo, rule.class_index)
        else:
            hi = min(hi, rule.class_index)
    return lo, hi
