"""HTTP session service: collect judgments per maker, run, inspect, negotiate.

A session starts from a problem skeleton (alternatives, criteria, makers);
each maker upserts a judgment matrix; once the grid is complete the session
can run, which persists it to the knowledge store and caches the pipeline
report.  All bodies and responses are JSON.  Status codes: 200/201 success,
400 validation failure, 404 unknown id, 409 phase conflict.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.responses import JSONResponse

from . import pipeline as pl
from .errors import DecisionError, SchemaError
from .model import CellValue, DecisionMatrix, GroupProblem, validate_problem
from .rough import SortingTable
from .schema import ParsedProblem, parse_problem_document, serialize_problem
from .store import KnowledgeStore, SessionRecord, scheme_descriptor
from .environment import classify_problem


@dataclass
class SessionState:
    id: str
    alternatives: tuple
    criteria: tuple
    makers: tuple
    sorting: SortingTable | None
    flags: tuple[str, ...]
    problem_id: str
    judgments: dict[str, DecisionMatrix] = field(default_factory=dict)
    phase: str = "collecting"  # collecting | complete | evaluated
    report_doc: dict | None = None
    method: str | None = None
    scheme_refs: list[str] = field(default_factory=list)

    def pending_makers(self) -> list[str]:
        return [m.id for m in self.makers if not self._has_full_matrix(m.id)]

    def _has_full_matrix(self, maker_id: str) -> bool:
        matrix = self.judgments.get(maker_id)
        if matrix is None:
            return False
        for alt in self.alternatives:
            for crit in self.criteria:
                if matrix.cell(alt.id, crit.id) is None:
                    return False
        return True

    def refresh_phase(self) -> None:
        if self.phase == "evaluated":
            return
        self.phase = "complete" if not self.pending_makers() else "collecting"

    def to_problem(self) -> GroupProblem:
        return GroupProblem(
            id=self.problem_id,
            alternatives=self.alternatives,
            criteria=self.criteria,
            makers=self.makers,
            matrices=tuple(
                self.judgments[m.id] for m in self.makers if m.id in self.judgments
            ),
        )

    def snapshot(self) -> dict:
        parsed = ParsedProblem(self.to_problem(), self.sorting, self.flags)
        doc = serialize_problem(parsed)
        return {
            "id": self.id,
            "phase": self.phase,
            "problem": doc["problem"],
            "pendingMakers": self.pending_makers(),
        }


def _error(status: int, code: str, message: str = "") -> JSONResponse:
    return JSONResponse({"error": code, "message": message}, status_code=status)


def create_app(store: KnowledgeStore, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="groupmcda session service")
    sessions: dict[str, SessionState] = {}
    locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()

    def session_lock(sid: str) -> threading.Lock:
        with registry_lock:
            return locks.setdefault(sid, threading.Lock())

    @app.post("/api/sessions", status_code=201)
    def create_session(body: dict = Body(...)):
        doc = dict(body)
        problem = doc.get("problem")
        if isinstance(problem, dict) and "judgments" not in problem:
            problem = {**problem, "judgments": []}
            doc["problem"] = problem
        try:
            parsed = parse_problem_document(doc)
        except SchemaError as exc:
            return _error(400, "PARSE_ERROR", str(exc))
        sid = secrets.token_urlsafe(12)
        state = SessionState(
            id=sid,
            alternatives=parsed.problem.alternatives,
            criteria=parsed.problem.criteria,
            makers=parsed.problem.makers,
            sorting=parsed.sorting,
            flags=parsed.flags,
            problem_id=parsed.problem.id,
        )
        for matrix in parsed.problem.matrices:
            state.judgments[matrix.maker] = matrix
        state.refresh_phase()
        sessions[sid] = state
        return {"id": sid, "phase": state.phase}

    @app.get("/api/sessions/{sid}")
    def get_session(sid: str):
        state = sessions.get(sid)
        if state is None:
            return _error(404, "UNKNOWN_ID", sid)
        return state.snapshot()

    @app.put("/api/sessions/{sid}/judgments/{maker_id}")
    def put_judgment(sid: str, maker_id: str, body: dict = Body(...)):
        state = sessions.get(sid)
        if state is None:
            return _error(404, "UNKNOWN_ID", sid)
        if maker_id not in {m.id for m in state.makers}:
            return _error(404, "UNKNOWN_ID", f"maker {maker_id}")
        if state.phase == "evaluated":
            return _error(409, "PHASE_CONFLICT", "session already evaluated")
        unknown = set(body) - {"criterionWeights", "cells"}
        if unknown:
            return _error(400, "PARSE_ERROR", f"unknown fields {sorted(unknown)}")
        if "criterionWeights" not in body or "cells" not in body:
            return _error(400, "PARSE_ERROR", "need criterionWeights and cells")
        judgment_doc = {
            "problem": {
                "id": state.problem_id,
                "alternatives": [{"id": a.id, "name": a.name} for a in state.alternatives],
                "criteria": [
                    {"id": c.id, "name": c.name, "direction": c.direction}
                    for c in state.criteria
                ],
                "makers": [{"id": m.id, "weight": m.weight} for m in state.makers],
                "judgments": [
                    {
                        "maker": maker_id,
                        "criterionWeights": body["criterionWeights"],
                        "cells": body["cells"],
                    }
                ],
            }
        }
        try:
            parsed = parse_problem_document(judgment_doc)
        except SchemaError as exc:
            return _error(400, "PARSE_ERROR", str(exc))
        matrix = parsed.problem.matrices[0]
        probe = GroupProblem(
            id=state.problem_id,
            alternatives=state.alternatives,
            criteria=state.criteria,
            makers=state.makers,
            matrices=(matrix,),
        )
        cell_errors = [
            v
            for v in validate_problem(probe).violations
            if v.severity == "error" and v.location.startswith(f"matrices[{maker_id}]")
        ]
        if cell_errors:
            return _error(400, "INVALID_JUDGMENT", "; ".join(v.code for v in cell_errors))
        with session_lock(sid):
            state.judgments[maker_id] = matrix
            state.refresh_phase()
            return {"phase": state.phase, "submitted": maker_id}

    @app.post("/api/sessions/{sid}/run")
    def run_session(sid: str):
        state = sessions.get(sid)
        if state is None:
            return _error(404, "UNKNOWN_ID", sid)
        with session_lock(sid):
            if state.phase != "complete":
                return _error(409, "PHASE_CONFLICT", f"phase is {state.phase}")
            problem = state.to_problem()
            before = {r.id for r in store.list_schemes()}
            try:
                report = pl.run_pipeline(
                    problem,
                    state.sorting,
                    state.flags,
                    pl.PipelineOptions(store=store),
                )
            except DecisionError as exc:
                return _error(400, exc.code, str(exc))
            doc = report.to_json()
            if report.error == "VALIDATION_FAILED":
                return _error(400, "VALIDATION_FAILED", "strict validation failed")
            if report.error:
                return _error(400, report.error, "")
            state.scheme_refs = sorted(
                r.id for r in store.list_schemes() if r.id not in before
            )
            store.persist_session(
                SessionRecord(
                    id=sid,
                    problem_doc=serialize_problem(
                        ParsedProblem(problem, state.sorting, state.flags)
                    ),
                    report_doc=doc,
                    scheme_refs=state.scheme_refs,
                )
            )
            state.report_doc = doc
            state.method = report.result.method
            state.phase = "evaluated"
            return doc

    @app.get("/api/sessions/{sid}/result")
    def get_result(sid: str):
        state = sessions.get(sid)
        if state is None:
            return _error(404, "UNKNOWN_ID", sid)
        if state.phase != "evaluated":
            return _error(409, "PHASE_CONFLICT", f"phase is {state.phase}")
        return state.report_doc["result"]

    @app.get("/api/sessions/{sid}/consensus")
    def get_consensus(sid: str):
        state = sessions.get(sid)
        if state is None:
            return _error(404, "UNKNOWN_ID", sid)
        if state.phase != "evaluated":
            return _error(409, "PHASE_CONFLICT", f"phase is {state.phase}")
        conflict = next(s for s in state.report_doc["stages"] if s["stage"] == "conflict")
        return conflict["payload"]

    @app.post("/api/sessions/{sid}/whatif")
    def whatif(sid: str, body: dict = Body(...)):
        state = sessions.get(sid)
        if state is None:
            return _error(404, "UNKNOWN_ID", sid)
        if state.phase != "evaluated":
            return _error(409, "PHASE_CONFLICT", f"phase is {state.phase}")
        unknown = set(body) - {"criterion", "delta"}
        if unknown:
            return _error(400, "PARSE_ERROR", f"unknown fields {sorted(unknown)}")
        criterion = body.get("criterion")
        delta = body.get("delta")
        if not isinstance(criterion, str) or isinstance(delta, bool) or not isinstance(delta, (int, float)):
            return _error(400, "PARSE_ERROR", "need criterion (string) and delta (number)")
        problem = state.to_problem()
        try:
            result = pl.whatif_weights(
                problem, state.method, criterion, float(delta), sorting=state.sorting
            )
            result.min_flip_delta = pl.min_weight_flip(
                problem, state.method, criterion, sorting=state.sorting
            )
        except DecisionError as exc:
            return _error(400, exc.code, str(exc))
        return result.to_json()

    @app.get("/api/schemes")
    def similar_schemes(similarTo: str, k: int = 3):
        state = sessions.get(similarTo)
        if state is None:
            return _error(404, "UNKNOWN_ID", similarTo)
        problem = state.to_problem()
        env = classify_problem(problem, state.sorting, state.flags)
        descriptor = scheme_descriptor(
            len(state.alternatives), len(state.criteria), len(state.makers), env.uncertainty_class
        )
        out = []
        for record, similarity in store.retrieve_similar_schemes(descriptor, k=k):
            doc = record.to_json()
            doc["similarity"] = similarity
            out.append(doc)
        return out

    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"
    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="console")

    return app
