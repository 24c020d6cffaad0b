"""File-backed knowledge warehouse: sessions, schemes, lifecycle, retrieval.

The store is a directory with an append-only newline-delimited JSON journal
plus one document file per session; state is rebuilt by replaying the
journal, so the history stays inspectable and diff-friendly.  Scheme
records move through a fixed lifecycle::

    acquired -> represented -> (selected | generated) -> assimilated -> emitted

and only emitted schemes are eligible for similarity retrieval.  Mutations
are serialized through a single writer lock; a reader never observes a torn
journal entry because entries are parsed line-complete.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from .errors import DecisionError

LIFECYCLE_EDGES: frozenset[tuple[str, str]] = frozenset(
    {
        ("acquired", "represented"),
        ("represented", "selected"),
        ("represented", "generated"),
        ("selected", "assimilated"),
        ("generated", "assimilated"),
        ("assimilated", "emitted"),
    }
)
STATUSES = ("acquired", "represented", "selected", "generated", "assimilated", "emitted")

UNCERTAINTY_ONE_HOT = ("certain", "stochastic", "fuzzy", "rough", "multiple")


def scheme_descriptor(
    alternative_count: int, criterion_count: int, maker_count: int, uncertainty_class: str
) -> tuple[float, ...]:
    """Fixed 3+5 feature vector: log-scaled counts plus class one-hot."""
    counts = (
        math.log1p(alternative_count),
        math.log1p(criterion_count),
        math.log1p(maker_count),
    )
    one_hot = tuple(1.0 if uncertainty_class == u else 0.0 for u in UNCERTAINTY_ONE_HOT)
    return counts + one_hot


def cosine_similarity(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0 or nb == 0:
        return 0.0
    return dot / (na * nb)


@dataclass(frozen=True)
class SchemeRecord:
    id: str
    descriptor: tuple[float, ...]
    method: str
    result_order: tuple[str, ...]
    status: str
    created_at: str
    version: int = 1

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "descriptor": list(self.descriptor),
            "method": self.method,
            "resultOrder": list(self.result_order),
            "status": self.status,
            "createdAt": self.created_at,
            "version": self.version,
        }


@dataclass
class SessionRecord:
    id: str
    problem_doc: dict
    report_doc: dict
    scheme_refs: list[str]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "problem": self.problem_doc,
            "report": self.report_doc,
            "schemeRefs": list(self.scheme_refs),
        }


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class KnowledgeStore:
    """Single-writer, multi-reader store rooted at a directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.sessions_dir = self.root / "sessions"
        self.journal_path = self.root / "journal.ndjson"
        self._lock = threading.Lock()
        self._sessions: dict[str, SessionRecord] = {}
        self._schemes: dict[str, SchemeRecord] = {}
        self._scheme_seq: dict[str, int] = {}  # insertion order for tie-breaks
        try:
            self.sessions_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise DecisionError("IO_FAILURE", str(exc)) from exc
        self._replay()

    # -- journal ---------------------------------------------------------

    def _replay(self) -> None:
        if not self.journal_path.exists():
            return
        text = self.journal_path.read_text(encoding="utf-8")
        for line in text.split("\n"):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError:
                continue  # torn trailing entry; ignore
            self._apply(entry)

    def _apply(self, entry: dict) -> None:
        op, rid, payload = entry["op"], entry["id"], entry["payload"]
        if op == "session":
            self._sessions[rid] = SessionRecord(
                id=rid,
                problem_doc=payload["problem"],
                report_doc=payload["report"],
                scheme_refs=list(payload.get("schemeRefs", [])),
            )
        elif op == "scheme":
            record = SchemeRecord(
                id=rid,
                descriptor=tuple(payload["descriptor"]),
                method=payload["method"],
                result_order=tuple(payload["resultOrder"]),
                status=payload["status"],
                created_at=payload["createdAt"],
                version=entry["version"],
            )
            self._schemes[rid] = record
            self._scheme_seq[rid] = len(self._scheme_seq)
        elif op == "transition":
            current = self._schemes[rid]
            self._schemes[rid] = replace(
                current, status=payload["status"], version=entry["version"]
            )

    def _append(self, op: str, rid: str, version: int, payload: dict) -> None:
        entry = {
            "op": op,
            "id": rid,
            "version": version,
            "timestamp": _now(),
            "payload": payload,
        }
        try:
            with self.journal_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")
                fh.flush()
        except OSError as exc:
            raise DecisionError("IO_FAILURE", str(exc)) from exc

    # -- sessions --------------------------------------------------------

    def persist_session(self, session: SessionRecord) -> str:
        with self._lock:
            if session.id in self._sessions:
                raise DecisionError("DUPLICATE_ID", f"session {session.id}")
            doc = session.to_json()
            self._append("session", session.id, 1, {k: doc[k] for k in ("problem", "report", "schemeRefs")})
            path = self.sessions_dir / f"{session.id}.json"
            try:
                path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
            except OSError as exc:
                raise DecisionError("IO_FAILURE", str(exc)) from exc
            self._sessions[session.id] = session
            return session.id

    def load_session(self, session_id: str) -> dict:
        record = self._sessions.get(session_id)
        if record is None:
            raise DecisionError("UNKNOWN_ID", f"session {session_id}")
        return record.to_json()

    def list_sessions(self) -> list[str]:
        return list(self._sessions)

    # -- schemes ---------------------------------------------------------

    def add_scheme(
        self,
        scheme_id: str,
        descriptor: tuple[float, ...],
        method: str,
        result_order: list[str] | tuple[str, ...],
    ) -> SchemeRecord:
        with self._lock:
            if scheme_id in self._schemes:
                raise DecisionError("DUPLICATE_ID", f"scheme {scheme_id}")
            record = SchemeRecord(
                id=scheme_id,
                descriptor=tuple(descriptor),
                method=method,
                result_order=tuple(result_order),
                status="acquired",
                created_at=_now(),
                version=1,
            )
            payload = record.to_json()
            del payload["version"]
            self._append("scheme", scheme_id, 1, payload)
            self._schemes[scheme_id] = record
            self._scheme_seq[scheme_id] = len(self._scheme_seq)
            return record

    def get_scheme(self, scheme_id: str) -> SchemeRecord:
        record = self._schemes.get(scheme_id)
        if record is None:
            raise DecisionError("UNKNOWN_ID", f"scheme {scheme_id}")
        return record

    def list_schemes(self) -> list[SchemeRecord]:
        return list(self._schemes.values())

    def transition_status(self, scheme_id: str, next_status: str) -> SchemeRecord:
        with self._lock:
            record = self._schemes.get(scheme_id)
            if record is None:
                raise DecisionError("UNKNOWN_ID", f"scheme {scheme_id}")
            if next_status not in STATUSES:
                raise DecisionError("ILLEGAL_TRANSITION", f"unknown status {next_status!r}")
            if (record.status, next_status) not in LIFECYCLE_EDGES:
                raise DecisionError(
                    "ILLEGAL_TRANSITION", f"{record.status} -> {next_status}"
                )
            updated = replace(record, status=next_status, version=record.version + 1)
            self._append("transition", scheme_id, updated.version, {"status": next_status})
            self._schemes[scheme_id] = updated
            return updated

    def emit_scheme(self, scheme_id: str) -> SchemeRecord:
        """Walk a fresh record through the full lifecycle to emitted."""
        self.transition_status(scheme_id, "represented")
        self.transition_status(scheme_id, "generated")
        self.transition_status(scheme_id, "assimilated")
        return self.transition_status(scheme_id, "emitted")

    def retrieve_similar_schemes(
        self, descriptor: tuple[float, ...], k: int = 3
    ) -> list[tuple[SchemeRecord, float]]:
        """Top-k emitted schemes by cosine similarity, newest first on ties."""
        if k < 1:
            raise DecisionError("BAD_K", "k must be >= 1")
        candidates = [r for r in self._schemes.values() if r.status == "emitted"]
        scored = [
            (r, cosine_similarity(descriptor, r.descriptor)) for r in candidates
        ]
        # insertion order tracks creation time, so -seq is newest-first
        scored.sort(key=lambda rs: (-rs[1], -self._scheme_seq[rs[0].id]))
        return scored[:k]
