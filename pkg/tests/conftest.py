import json
from pathlib import Path

import pytest

from groupmcda.model import (
    Alternative,
    CellValue,
    Criterion,
    DecisionMaker,
    DecisionMatrix,
    GroupProblem,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def build_problem(
    cells_by_maker: dict[str, dict[str, dict[str, CellValue]]],
    weights_by_maker: dict[str, dict[str, float]],
    maker_weights: dict[str, float],
    directions: dict[str, str] | None = None,
    problem_id: str = "p",
) -> GroupProblem:
    """Assemble a GroupProblem from nested dicts keyed by ids."""
    directions = directions or {}
    alt_ids = sorted({a for cells in cells_by_maker.values() for a in cells})
    crit_ids = sorted({c for w in weights_by_maker.values() for c in w})
    return GroupProblem(
        id=problem_id,
        alternatives=tuple(Alternative(a, a.upper()) for a in alt_ids),
        criteria=tuple(
            Criterion(c, c.upper(), directions.get(c, "benefit")) for c in crit_ids
        ),
        makers=tuple(DecisionMaker(m, maker_weights[m]) for m in sorted(maker_weights)),
        matrices=tuple(
            DecisionMatrix(
                maker=m, cells=cells_by_maker[m], criterion_weights=weights_by_maker[m]
            )
            for m in sorted(maker_weights)
        ),
    )


def crisp_single_maker(
    rows: dict[str, dict[str, float]],
    weights: dict[str, float],
    directions: dict[str, str] | None = None,
    problem_id: str = "p",
) -> GroupProblem:
    cells = {a: {c: CellValue.of_crisp(v) for c, v in row.items()} for a, row in rows.items()}
    return build_problem({"m1": cells}, {"m1": weights}, {"m1": 1.0}, directions, problem_id)


@pytest.fixture
def certain_doc():
    return json.loads((FIXTURES / "certain.json").read_text())


@pytest.fixture
def golden_problem():
    """The bundled certain fixture: weights 0.6/0.4, rows (0.8,0.2)/(0.5,0.9)."""
    return crisp_single_maker(
        {"a": {"c1": 0.8, "c2": 0.2}, "b": {"c1": 0.5, "c2": 0.9}},
        {"c1": 0.6, "c2": 0.4},
    )
