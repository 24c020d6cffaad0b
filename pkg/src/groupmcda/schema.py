"""Strict problem-file schema: parsing and canonical serialization.

Top-level document::

    {"problem": {
        "id": str,
        "alternatives": [{"id", "name"?}],
        "criteria":     [{"id", "name"?, "direction"?}],
        "makers":       [{"id", "weight"}],
        "judgments":    [{"maker", "criterionWeights": {critId: w},
                          "cells": {altId: {critId: cell}}}],
        "sorting"?:     {"objects": [...], "classes": {obj: cls},
                         "values": {obj: {critId: v}}, "numClasses"?: int},
        "flags"?:       [str]
    }}

Cells are a bare number (crisp shorthand), {"kind": "crisp", "value": v},
{"kind": "dist", "outcomes": [[value, prob], ...]} or
{"kind": "ifs", "mu": m, "nu": n}.  Unknown fields anywhere are rejected so
document shape stays pinned for golden tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .environment import KNOWN_FLAGS
from .errors import SchemaError
from .model import (
    Alternative,
    CellValue,
    Criterion,
    DecisionMaker,
    DecisionMatrix,
    GroupProblem,
)
from .rough import SortingTable


@dataclass
class ParsedProblem:
    problem: GroupProblem
    sorting: SortingTable | None = None
    flags: tuple[str, ...] = ()


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"expected object, got {type(obj).__name__}", where)
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(f"unknown fields {sorted(unknown)}", where)
    missing = required - set(obj)
    if missing:
        raise SchemaError(f"missing fields {sorted(missing)}", where)


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected number, got {type(value).__name__}", where)
    return float(value)


def _string(value, where: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"expected string, got {type(value).__name__}", where)
    return value


def parse_cell(raw, where: str) -> CellValue:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return CellValue.of_crisp(float(raw))
    if not isinstance(raw, dict):
        raise SchemaError("cell must be a number or tagged object", where)
    kind = raw.get("kind")
    if kind == "crisp":
        _require_keys(raw, {"kind", "value"}, {"kind", "value"}, where)
        return CellValue.of_crisp(_number(raw["value"], where))
    if kind == "dist":
        _require_keys(raw, {"kind", "outcomes"}, {"kind", "outcomes"}, where)
        outcomes = raw["outcomes"]
        if not isinstance(outcomes, list) or not outcomes:
            raise SchemaError("outcomes must be a nonempty list", where)
        pairs = []
        for i, pair in enumerate(outcomes):
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(f"outcome {i} must be [value, probability]", where)
            pairs.append((_number(pair[0], where), _number(pair[1], where)))
        return CellValue.of_dist(pairs)
    if kind == "ifs":
        _require_keys(raw, {"kind", "mu", "nu"}, {"kind", "mu", "nu"}, where)
        return CellValue.of_ifs(_number(raw["mu"], where), _number(raw["nu"], where))
    raise SchemaError(f"unknown cell kind {kind!r}", where)


def _parse_sorting(raw: dict, criteria: list[Criterion]) -> SortingTable:
    where = "problem.sorting"
    _require_keys(raw, {"objects", "classes", "values", "numClasses"}, {"objects", "classes", "values"}, where)
    objects = raw["objects"]
    if not isinstance(objects, list) or not all(isinstance(o, str) for o in objects):
        raise SchemaError("objects must be a list of ids", where)
    classes = raw["classes"]
    if not isinstance(classes, dict):
        raise SchemaError("classes must map object id to class index", where)
    values = raw["values"]
    if not isinstance(values, dict):
        raise SchemaError("values must map object id to criterion values", where)

    by_id = {c.id: c for c in criteria}
    used: list[Criterion] = []
    table_values: dict[str, dict[str, float]] = {}
    for obj in objects:
        row = values.get(obj)
        if not isinstance(row, dict):
            raise SchemaError(f"missing values for object {obj}", where)
        table_values[obj] = {}
        for cid, v in row.items():
            if cid not in by_id:
                raise SchemaError(f"unknown criterion {cid} in sorting values", where)
            if by_id[cid] not in used:
                used.append(by_id[cid])
            table_values[obj][cid] = _number(v, f"{where}.values[{obj},{cid}]")
    assignment: dict[str, int] = {}
    for obj in objects:
        if obj not in classes:
            raise SchemaError(f"object {obj} has no class", where)
        cls = classes[obj]
        if isinstance(cls, bool) or not isinstance(cls, int):
            raise SchemaError(f"class of {obj} must be an integer", where)
        assignment[obj] = cls
    extra = set(classes) - set(objects)
    if extra:
        raise SchemaError(f"classes for undeclared objects {sorted(extra)}", where)
    num_classes = raw.get("numClasses", 0)
    if num_classes and (isinstance(num_classes, bool) or not isinstance(num_classes, int)):
        raise SchemaError("numClasses must be an integer", where)
    return SortingTable(
        objects=tuple(objects),
        criteria=tuple(sorted(used, key=lambda c: c.id)),
        values=table_values,
        class_assignment=assignment,
        num_classes=num_classes,
    )


def parse_problem_document(doc: dict) -> ParsedProblem:
    _require_keys(doc, {"problem"}, {"problem"}, "document")
    p = doc["problem"]
    _require_keys(
        p,
        {"id", "alternatives", "criteria", "makers", "judgments", "sorting", "flags"},
        {"id", "alternatives", "criteria", "makers", "judgments"},
        "problem",
    )

    alternatives = []
    for i, raw in enumerate(p["alternatives"]):
        where = f"problem.alternatives[{i}]"
        _require_keys(raw, {"id", "name"}, {"id"}, where)
        alternatives.append(Alternative(_string(raw["id"], where), raw.get("name", "")))

    criteria = []
    for i, raw in enumerate(p["criteria"]):
        where = f"problem.criteria[{i}]"
        _require_keys(raw, {"id", "name", "direction"}, {"id"}, where)
        direction = raw.get("direction", "benefit")
        if direction not in ("benefit", "cost"):
            raise SchemaError(f"direction must be benefit or cost, got {direction!r}", where)
        criteria.append(Criterion(_string(raw["id"], where), raw.get("name", ""), direction))

    makers = []
    for i, raw in enumerate(p["makers"]):
        where = f"problem.makers[{i}]"
        _require_keys(raw, {"id", "weight"}, {"id", "weight"}, where)
        makers.append(DecisionMaker(_string(raw["id"], where), _number(raw["weight"], where)))

    matrices = []
    for i, raw in enumerate(p["judgments"]):
        where = f"problem.judgments[{i}]"
        _require_keys(raw, {"maker", "criterionWeights", "cells"}, {"maker", "criterionWeights", "cells"}, where)
        weights = {
            cid: _number(w, f"{where}.criterionWeights[{cid}]")
            for cid, w in raw["criterionWeights"].items()
        }
        cells: dict[str, dict[str, CellValue]] = {}
        if not isinstance(raw["cells"], dict):
            raise SchemaError("cells must map alternative id to criterion cells", where)
        for aid, row in raw["cells"].items():
            if not isinstance(row, dict):
                raise SchemaError(f"cells[{aid}] must be an object", where)
            cells[aid] = {
                cid: parse_cell(cell, f"{where}.cells[{aid},{cid}]") for cid, cell in row.items()
            }
        matrices.append(
            DecisionMatrix(maker=_string(raw["maker"], where), cells=cells, criterion_weights=weights)
        )

    flags: tuple[str, ...] = ()
    if "flags" in p:
        if not isinstance(p["flags"], list):
            raise SchemaError("flags must be a list", "problem.flags")
        for f in p["flags"]:
            if f not in KNOWN_FLAGS:
                raise SchemaError(f"unknown flag {f!r}", "problem.flags")
        flags = tuple(p["flags"])

    sorting = None
    if "sorting" in p:
        sorting = _parse_sorting(p["sorting"], criteria)

    problem = GroupProblem(
        id=_string(p["id"], "problem.id"),
        alternatives=tuple(alternatives),
        criteria=tuple(criteria),
        makers=tuple(makers),
        matrices=tuple(matrices),
    )
    return ParsedProblem(problem=problem, sorting=sorting, flags=flags)


def load_problem_file(path: str | Path) -> ParsedProblem:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(str(exc), str(path)) from exc
    return parse_problem_document(doc)


def serialize_problem(parsed: ParsedProblem) -> dict:
    """Canonical document form; parse(serialize(p)) round-trips."""
    problem = parsed.problem
    doc: dict = {
        "id": problem.id,
        "alternatives": [{"id": a.id, "name": a.name} for a in problem.alternatives],
        "criteria": [
            {"id": c.id, "name": c.name, "direction": c.direction} for c in problem.criteria
        ],
        "makers": [{"id": m.id, "weight": m.weight} for m in problem.makers],
        "judgments": [
            {
                "maker": mx.maker,
                "criterionWeights": dict(sorted(mx.criterion_weights.items())),
                "cells": {
                    aid: {cid: cell.to_json() for cid, cell in sorted(row.items())}
                    for aid, row in sorted(mx.cells.items())
                },
            }
            for mx in problem.matrices
        ],
    }
    if parsed.sorting is not None:
        table = parsed.sorting
        doc["sorting"] = {
            "objects": list(table.objects),
            "classes": {o: table.class_assignment[o] for o in table.objects},
            "values": {o: dict(sorted(table.values[o].items())) for o in table.objects},
            "numClasses": table.num_classes,
        }
    if parsed.flags:
        doc["flags"] = list(parsed.flags)
    return {"problem": doc}
