"""Decision-environment analysis: uncertainty classification and method dispatch.

Cell kinds drive the classification: discrete distributions mean stochastic
information, (mu, nu) pairs mean fuzzy information, and an attached sorting
table means rough (example-based) information.  Two or more of those sources
at once classify the problem as `multiple`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import GroupProblem

KNOWN_FLAGS = ("deficiency", "incompleteness", "dynamic", "unclear", "inaccuracy", "multiple")

# Dispatch table: uncertainty class -> ordered method ids.
METHOD_DISPATCH: dict[str, list[str]] = {
    "certain": ["weighted_sum", "promethee2", "sir", "electre1"],
    "stochastic": ["expected_utility", "monte_carlo_stability", "fsd"],
    "fuzzy": ["ifwa_group"],
    "rough": ["drsa"],
}


@dataclass(frozen=True)
class EnvironmentReport:
    uncertainty_class: str  # certain | stochastic | fuzzy | rough | multiple
    flags: frozenset[str] = frozenset()
    per_criterion_kinds: dict[str, frozenset[str]] = field(default_factory=dict)
    present: tuple[str, ...] = ()  # uncertain sources present, dispatch order

    def to_json(self) -> dict:
        return {
            "uncertaintyClass": self.uncertainty_class,
            "flags": sorted(self.flags),
            "perCriterionKinds": {c: sorted(k) for c, k in sorted(self.per_criterion_kinds.items())},
        }


def classify_problem(
    problem: GroupProblem,
    sorting_table=None,
    declared_flags: tuple[str, ...] = (),
) -> EnvironmentReport:
    """Classify the problem's uncertainty type and audit information quality.

    `declared_flags` carries caller annotations (deficiency, dynamic, unclear,
    inaccuracy) that cannot be detected from a static snapshot; only
    incompleteness and multiplicity are auto-detected.
    """
    kinds_per_crit: dict[str, set[str]] = {c.id: set() for c in problem.criteria}
    observed: set[str] = set()
    missing = False
    for mx in problem.matrices:
        for alt in problem.alternatives:
            for crit in problem.criteria:
                cell = mx.cell(alt.id, crit.id)
                if cell is None:
                    missing = True
                    continue
                kinds_per_crit[crit.id].add(cell.kind)
                observed.add(cell.kind)

    sources: list[str] = []
    if "dist" in observed:
        sources.append("stochastic")
    if "ifs" in observed:
        sources.append("fuzzy")
    if sorting_table is not None:
        sources.append("rough")

    if len(sources) >= 2:
        klass = "multiple"
    elif len(sources) == 1:
        klass = sources[0]
    else:
        klass = "certain"

    flags = {f for f in declared_flags if f in KNOWN_FLAGS}
    if missing:
        flags.add("incompleteness")
    if klass == "multiple":
        flags.add("multiple")

    return EnvironmentReport(
        uncertainty_class=klass,
        flags=frozenset(flags),
        per_criterion_kinds={c: frozenset(k) for c, k in kinds_per_crit.items()},
        present=tuple(sources),
    )


def recommend_methods(report: EnvironmentReport) -> list[str]:
    """Ordered, duplicate-free method ids for the report's uncertainty class."""
    if report.uncertainty_class != "multiple":
        return list(METHOD_DISPATCH[report.uncertainty_class])
    out: list[str] = []
    for source in ("stochastic", "fuzzy", "rough"):
        if source in report.present:
            for mid in METHOD_DISPATCH[source]:
                if mid not in out:
                    out.append(mid)
    return out
