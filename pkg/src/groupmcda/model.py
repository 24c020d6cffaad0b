"""Problem model shared by every ranking method.

A group problem bundles alternatives, criteria, decision makers and one
judgment matrix per maker.  Matrix cells are tagged values: a crisp real,
a discrete probability distribution, or an intuitionistic fuzzy pair
(mu, nu).  Validation reports violations instead of raising so that a
caller can show all problems at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DecisionError

WEIGHT_TOL = 1e-6
NUMERIC_TOL = 1e-9

CellGrid = dict[str, dict[str, "CellValue"]]


@dataclass(frozen=True)
class Alternative:
    id: str
    name: str = ""


@dataclass(frozen=True)
class Criterion:
    id: str
    name: str = ""
    direction: str = "benefit"  # "benefit" or "cost"


@dataclass(frozen=True)
class DecisionMaker:
    id: str
    weight: float = 1.0


@dataclass(frozen=True)
class CellValue:
    """Tagged judgment value; exactly one payload per kind."""

    kind: str  # "crisp" | "dist" | "ifs"
    crisp: float | None = None
    dist: tuple[tuple[float, float], ...] | None = None  # (outcome, probability)
    ifs: tuple[float, float] | None = None  # (mu, nu)

    @staticmethod
    def of_crisp(value: float) -> "CellValue":
        return CellValue(kind="crisp", crisp=float(value))

    @staticmethod
    def of_dist(outcomes) -> "CellValue":
        return CellValue(kind="dist", dist=tuple((float(v), float(p)) for v, p in outcomes))

    @staticmethod
    def of_ifs(mu: float, nu: float) -> "CellValue":
        return CellValue(kind="ifs", ifs=(float(mu), float(nu)))

    def to_json(self) -> dict:
        if self.kind == "crisp":
            return {"kind": "crisp", "value": self.crisp}
        if self.kind == "dist":
            return {"kind": "dist", "outcomes": [[v, p] for v, p in self.dist]}
        return {"kind": "ifs", "mu": self.ifs[0], "nu": self.ifs[1]}


@dataclass(frozen=True)
class DecisionMatrix:
    maker: str
    cells: CellGrid  # alternative id -> criterion id -> CellValue
    criterion_weights: dict[str, float]

    def cell(self, alt_id: str, crit_id: str) -> CellValue | None:
        return self.cells.get(alt_id, {}).get(crit_id)


@dataclass(frozen=True)
class GroupProblem:
    id: str
    alternatives: tuple[Alternative, ...]
    criteria: tuple[Criterion, ...]
    makers: tuple[DecisionMaker, ...]
    matrices: tuple[DecisionMatrix, ...]

    def alternative_ids(self) -> list[str]:
        return [a.id for a in self.alternatives]

    def criterion_ids(self) -> list[str]:
        return [c.id for c in self.criteria]

    def matrix_for(self, maker_id: str) -> DecisionMatrix | None:
        for m in self.matrices:
            if m.maker == maker_id:
                return m
        return None


@dataclass(frozen=True)
class Violation:
    code: str
    location: str
    severity: str  # "error" | "warning"
    message: str = ""

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "location": self.location,
            "severity": self.severity,
            "message": self.message,
        }


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "error"]

    def warnings(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "warning"]

    def to_json(self) -> dict:
        return {"violations": [v.to_json() for v in self.violations]}


def _check_cell(cell: CellValue, where: str, out: list[Violation]) -> None:
    payloads = [cell.crisp is not None, cell.dist is not None, cell.ifs is not None]
    expected = {"crisp": 0, "dist": 1, "ifs": 2}
    if cell.kind not in expected:
        out.append(Violation("BAD_CELL", where, "error", f"unknown kind {cell.kind!r}"))
        return
    if sum(payloads) != 1 or not payloads[expected[cell.kind]]:
        out.append(Violation("BAD_CELL", where, "error", "payload does not match kind"))
        return
    if cell.kind == "crisp":
        if cell.crisp != cell.crisp:  # NaN
            out.append(Violation("BAD_CELL", where, "error", "crisp value is NaN"))
    elif cell.kind == "dist":
        if len(cell.dist) < 1:
            out.append(Violation("BAD_CELL", where, "error", "distribution needs >= 1 outcome"))
            return
        total = 0.0
        for v, p in cell.dist:
            if not 0.0 <= p <= 1.0:
                out.append(Violation("BAD_CELL", where, "error", f"probability {p} outside [0,1]"))
                return
            total += p
        if abs(total - 1.0) > NUMERIC_TOL:
            out.append(Violation("BAD_CELL", where, "error", f"probabilities sum to {total}"))
    else:
        mu, nu = cell.ifs
        if not (0.0 <= mu <= 1.0 and 0.0 <= nu <= 1.0):
            out.append(Violation("BAD_CELL", where, "error", "mu/nu outside [0,1]"))
        elif mu + nu > 1.0 + NUMERIC_TOL:
            out.append(Violation("BAD_CELL", where, "error", f"mu+nu = {mu + nu} > 1"))


def validate_problem(problem: GroupProblem, strict: bool = False) -> ValidationReport:
    """Check every model invariant; returns a report, never raises.

    In non-strict mode missing grid cells are warnings; in strict mode
    they are errors.  All other violations are always errors.
    """
    out: list[Violation] = []

    alt_ids = [a.id for a in problem.alternatives]
    crit_ids = [c.id for c in problem.criteria]
    maker_ids = [m.id for m in problem.makers]

    for label, ids in (("alternatives", alt_ids), ("criteria", crit_ids), ("makers", maker_ids)):
        for i in ids:
            if not i:
                out.append(Violation("EMPTY_ID", label, "error"))
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        for d in dupes:
            out.append(Violation("DUPLICATE_ID", f"{label}[{d}]", "error"))

    if len(problem.alternatives) < 2:
        out.append(Violation("TOO_FEW_ALTERNATIVES", "alternatives", "error", "need >= 2"))
    if len(problem.criteria) < 1:
        out.append(Violation("NO_CRITERIA", "criteria", "error"))
    if len(problem.makers) < 1:
        out.append(Violation("NO_MAKERS", "makers", "error"))

    for c in problem.criteria:
        if c.direction not in ("benefit", "cost"):
            out.append(Violation("BAD_DIRECTION", f"criteria[{c.id}]", "error", c.direction))

    for m in problem.makers:
        if not 0.0 <= m.weight <= 1.0:
            out.append(Violation("WEIGHT_RANGE", f"makers[{m.id}]", "error", str(m.weight)))
    if problem.makers:
        total = sum(m.weight for m in problem.makers)
        if abs(total - 1.0) > WEIGHT_TOL:
            out.append(Violation("WEIGHT_SUM", "makers", "error", f"weights sum to {total}"))

    seen_makers = [mx.maker for mx in problem.matrices]
    for mid in maker_ids:
        n = seen_makers.count(mid)
        if n == 0:
            out.append(Violation("MISSING_MATRIX", f"makers[{mid}]", "error"))
        elif n > 1:
            out.append(Violation("DUPLICATE_MATRIX", f"makers[{mid}]", "error"))
    for mid in seen_makers:
        if mid not in maker_ids:
            out.append(Violation("UNKNOWN_MAKER", f"matrices[{mid}]", "error"))

    for mx in problem.matrices:
        loc = f"matrices[{mx.maker}]"
        for cid in mx.criterion_weights:
            if cid not in crit_ids:
                out.append(Violation("UNKNOWN_CRITERION", f"{loc}.weights[{cid}]", "error"))
        for cid, w in mx.criterion_weights.items():
            if not 0.0 <= w <= 1.0:
                out.append(Violation("WEIGHT_RANGE", f"{loc}.weights[{cid}]", "error", str(w)))
        missing_weights = [cid for cid in crit_ids if cid not in mx.criterion_weights]
        for cid in missing_weights:
            out.append(Violation("MISSING_WEIGHT", f"{loc}.weights[{cid}]", "error"))
        if not missing_weights and crit_ids:
            total = sum(mx.criterion_weights.get(cid, 0.0) for cid in crit_ids)
            if abs(total - 1.0) > WEIGHT_TOL:
                out.append(Violation("WEIGHT_SUM", f"{loc}.weights", "error", f"sum {total}"))

        for aid, row in mx.cells.items():
            if aid not in alt_ids:
                out.append(Violation("UNKNOWN_ALTERNATIVE", f"{loc}.cells[{aid}]", "error"))
                continue
            for cid, cell in row.items():
                if cid not in crit_ids:
                    out.append(Violation("UNKNOWN_CRITERION", f"{loc}.cells[{aid},{cid}]", "error"))
                    continue
                _check_cell(cell, f"{loc}.cells[{aid},{cid}]", out)
        for aid in alt_ids:
            for cid in crit_ids:
                if mx.cell(aid, cid) is None:
                    out.append(
                        Violation(
                            "MISSING_CELL",
                            f"{loc}.cells[{aid},{cid}]",
                            "error" if strict else "warning",
                        )
                    )

    return ValidationReport(violations=out)


def crisp_values(cells: CellGrid) -> dict[str, dict[str, float]]:
    """Extract the crisp payload of every cell; NON_CRISP_CELL otherwise."""
    out: dict[str, dict[str, float]] = {}
    for aid, row in cells.items():
        out[aid] = {}
        for cid, cell in row.items():
            if cell.kind != "crisp":
                raise DecisionError("NON_CRISP_CELL", f"cell ({aid},{cid}) has kind {cell.kind}")
            out[aid][cid] = cell.crisp
    return out


def normalize_crisp_matrix(
    values: dict[str, dict[str, float]] | CellGrid,
    criteria: list[Criterion] | tuple[Criterion, ...],
) -> dict[str, dict[str, float]]:
    """Min-max normalize per criterion into [0,1].

    Benefit: (v - min) / (max - min); cost: (max - v) / (max - min).
    A constant column maps to 0.5 everywhere so degenerate inputs stay
    rankable.
    """
    if any(isinstance(cell, CellValue) for row in values.values() for cell in row.values()):
        values = crisp_values(values)  # type: ignore[arg-type]

    out: dict[str, dict[str, float]] = {aid: {} for aid in values}
    for crit in criteria:
        column = [(aid, row[crit.id]) for aid, row in values.items() if crit.id in row]
        if not column:
            continue
        lo = min(v for _, v in column)
        hi = max(v for _, v in column)
        for aid, v in column:
            if hi == lo:
                r = 0.5
            elif crit.direction == "cost":
                r = (hi - v) / (hi - lo)
            else:
                r = (v - lo) / (hi - lo)
            out[aid][crit.id] = r
    return out


def normalize_weights(raw: list[float]) -> list[float]:
    """Scale nonnegative weights to sum to 1, preserving order."""
    if any(w < 0 for w in raw):
        raise DecisionError("NEGATIVE_WEIGHT", f"weights must be nonnegative: {raw}")
    total = sum(raw)
    if total == 0:
        raise DecisionError("ALL_ZERO_WEIGHTS")
    return [w / total for w in raw]
