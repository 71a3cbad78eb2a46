"""The iterative tutoring loop: analyze, hint, fix or revise, repeat.

A session holds the teacher reference, the student's evolving project, the
current report (recomputed on every change, bumping the revision), and a
transcript. Hints are minted from the most critical unresolved item; applying
one re-analyzes the project, and the loop completes when the report comes
back empty, at which point the summative message is issued.

Sessions persist in an embedded sqlite store keyed by id (documents plus
transcript; analysis is recomputed on load since it is deterministic) with an
idle TTL, and survive service restarts. Mutations take a per-session lock.
"""

from __future__ import annotations

import json
import sqlite3
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from . import llm, render
from .diff import PARAMETER, DiffConfig, DiffItem, DiffReport, diff_normalized
from .model import ProjectAst, StitchError
from .normalize import NormalizedAst, denormalize_fragment, normalize
from .repair import apply_patch, synthesize_patch
from .sb3 import load_project, pack_project, serialize_project

IN_PROGRESS = "IN_PROGRESS"
COMPLETE = "COMPLETE"

SUMMATIVE_MESSAGE = "Congratulations, your project now implements all target features."

DEFAULT_TTL_SECONDS = 24 * 60 * 60


class SessionNotFound(StitchError):
    pass


class SessionComplete(StitchError):
    pass


class StaleHint(StitchError):
    pass


class SessionLoadError(StitchError):
    """A project container failed to load; ``side`` names which one."""

    def __init__(self, side: str, cause: Exception):
        super().__init__(f"{side} project failed to load: {cause}")
        self.side = side
        self.cause = cause


@dataclass
class Hint:
    hint_id: str
    item: DiffItem
    explanation: str
    student_render: dict | None
    teacher_render: dict | None
    patch_available: bool
    patch_destructive: bool

    def to_json(self) -> dict:
        return {
            "hintId": self.hint_id,
            "item": self.item.to_json(),
            "explanation": self.explanation,
            "studentRender": self.student_render,
            "teacherRender": self.teacher_render,
            "patchAvailable": self.patch_available,
            "patchDestructive": self.patch_destructive,
        }


@dataclass
class SessionState:
    session_id: str
    teacher: ProjectAst
    student: ProjectAst
    description: str | None = None
    report_revision: int = 0
    status: str = IN_PROGRESS
    transcript: list[dict] = field(default_factory=list)
    updated_at: float = field(default_factory=time.time)
    # analysis products, rebuilt after every change
    student_norm: NormalizedAst | None = None
    teacher_norm: NormalizedAst | None = None
    report: DiffReport | None = None

    def record(self, kind: str, **detail) -> None:
        self.transcript.append({"kind": kind, "at": time.time(), **detail})


class SessionStore:
    """sqlite-backed persistence with an in-memory cache and idle expiry."""

    def __init__(self, path: str | Path = ":memory:", ttl_seconds: float = DEFAULT_TTL_SECONDS):
        self.ttl_seconds = ttl_seconds
        self._lock = threading.Lock()
        self._cache: dict[str, SessionState] = {}
        self._db = sqlite3.connect(str(path), check_same_thread=False)
        self._db.execute(
            "CREATE TABLE IF NOT EXISTS sessions ("
            "id TEXT PRIMARY KEY, payload TEXT NOT NULL, updated REAL NOT NULL)"
        )
        self._db.commit()

    def save(self, state: SessionState) -> None:
        state.updated_at = time.time()
        payload = json.dumps(
            {
                "sessionId": state.session_id,
                "teacherDoc": serialize_project(state.teacher),
                "studentDoc": serialize_project(state.student),
                "description": state.description,
                "revision": state.report_revision,
                "status": state.status,
                "transcript": state.transcript,
            }
        )
        with self._lock:
            self._cache[state.session_id] = state
            self._db.execute(
                "INSERT OR REPLACE INTO sessions (id, payload, updated) VALUES (?, ?, ?)",
                (state.session_id, payload, state.updated_at),
            )
            self._db.commit()

    def load(self, session_id: str) -> SessionState | None:
        self.purge_expired()
        with self._lock:
            cached = self._cache.get(session_id)
            if cached is not None:
                return cached
            row = self._db.execute(
                "SELECT payload, updated FROM sessions WHERE id = ?", (session_id,)
            ).fetchone()
        if row is None:
            return None
        payload = json.loads(row[0])
        state = SessionState(
            session_id=payload["sessionId"],
            teacher=load_project(payload["teacherDoc"]),
            student=load_project(payload["studentDoc"]),
            description=payload.get("description"),
            report_revision=payload.get("revision", 0),
            status=payload.get("status", IN_PROGRESS),
            transcript=payload.get("transcript", []),
            updated_at=row[1],
        )
        with self._lock:
            self._cache[session_id] = state
        return state

    def purge_expired(self) -> None:
        cutoff = time.time() - self.ttl_seconds
        with self._lock:
            stale = [sid for sid, s in self._cache.items() if s.updated_at < cutoff]
            for sid in stale:
                del self._cache[sid]
            self._db.execute("DELETE FROM sessions WHERE updated < ?", (cutoff,))
            self._db.commit()


class TutorEngine:
    """All tutoring operations over a session store."""

    def __init__(
        self,
        store: SessionStore | None = None,
        provider: llm.ProviderConfig | None = None,
        diff_config: DiffConfig | None = None,
    ):
        self.store = store or SessionStore()
        self.provider = provider or llm.ProviderConfig()
        self.gateway = llm.Gateway(self.provider)
        self.diff_config = diff_config or DiffConfig()
        self._locks: dict[str, threading.RLock] = {}
        self._locks_guard = threading.Lock()

    # -- helpers -----------------------------------------------------------

    def _lock_for(self, session_id: str) -> threading.RLock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.RLock())

    def _get(self, session_id: str) -> SessionState:
        state = self.store.load(session_id)
        if state is None:
            raise SessionNotFound(f"no session {session_id!r}")
        if state.report is None:
            self._analyze(state)
        return state

    def _analyze(self, state: SessionState) -> None:
        state.student_norm = normalize(state.student)
        state.teacher_norm = normalize(state.teacher)
        state.report = diff_normalized(state.student_norm, state.teacher_norm, self.diff_config)
        state.status = COMPLETE if state.report.functionally_equivalent else IN_PROGRESS

    def _reanalyze(self, state: SessionState) -> None:
        state.report_revision += 1
        self._analyze(state)

    @staticmethod
    def _load_side(side: str, container: bytes | str) -> ProjectAst:
        try:
            return load_project(container)
        except StitchError as exc:
            raise SessionLoadError(side, exc) from exc

    # -- operations ----------------------------------------------------------

    def create_session(
        self,
        teacher_container: bytes | str,
        student_container: bytes | str,
        description: str | None = None,
    ) -> SessionState:
        teacher = self._load_side("teacher", teacher_container)
        student = self._load_side("student", student_container)
        state = SessionState(
            session_id=uuid.uuid4().hex,
            teacher=teacher,
            student=student,
            description=description,
        )
        self._analyze(state)
        state.record("session_created", items=len(state.report.items))
        self.store.save(state)
        return state

    def _hint_for(self, state: SessionState) -> Hint:
        assert state.report is not None
        item = state.report.items[0]
        hint_id = f"r{state.report_revision}-{item.item_id()}"
        bundle = llm.build_reasoning_prompt(
            state.teacher, state.student, item, state.description
        )
        explanation = self.gateway.generate(bundle)
        highlights = set()
        if item.level == PARAMETER:
            highlights = {((), slot) for slot in item.changed_slots}
        return Hint(
            hint_id=hint_id,
            item=item,
            explanation=explanation,
            student_render=self._render(item.student_fragment, state, highlights),
            teacher_render=self._render(item.teacher_fragment, state, highlights),
            patch_available=True,
            patch_destructive=item.kind == "EXTRA",
        )

    def _render(self, fragment, state: SessionState, highlights) -> dict | None:
        if fragment is None:
            return None
        translated, _ = denormalize_fragment(
            fragment, state.student_norm.rename_map, state.teacher_norm.rename_map
        )
        return {
            "text": render.to_text(translated),
            "spec": render.to_render_spec(translated, highlights).to_json(),
        }

    def next_hint(self, session_id: str) -> Hint:
        with self._lock_for(session_id):
            state = self._get(session_id)
            if state.status == COMPLETE:
                raise SessionComplete(SUMMATIVE_MESSAGE)
            hint = self._hint_for(state)
            last_shown = next(
                (e.get("hintId") for e in reversed(state.transcript) if e["kind"] == "hint_shown"),
                None,
            )
            if last_shown != hint.hint_id:
                state.record("hint_shown", hintId=hint.hint_id, severity=hint.item.severity)
                self.store.save(state)
            return hint

    def apply_fix(self, session_id: str, hint_id: str) -> SessionState:
        with self._lock_for(session_id):
            state = self._get(session_id)
            if state.status == COMPLETE:
                raise SessionComplete(SUMMATIVE_MESSAGE)
            prefix = f"r{state.report_revision}-"
            if not hint_id.startswith(prefix):
                raise StaleHint(f"hint {hint_id!r} is not from revision {state.report_revision}")
            item_id = hint_id[len(prefix):]
            item = next((i for i in state.report.items if i.item_id() == item_id), None)
            if item is None:
                raise StaleHint(f"hint {hint_id!r} does not match any current item")
            patch = synthesize_patch(
                item, state.student, state.teacher, state.student_norm, state.teacher_norm
            )
            patch.report_revision = state.report_revision
            state.student = apply_patch(state.student, patch)
            state.record("patch_applied", hintId=hint_id, ops=len(patch.ops))
            self._reanalyze(state)
            self.store.save(state)
            return state

    def submit_revision(self, session_id: str, student_container: bytes | str) -> SessionState:
        with self._lock_for(session_id):
            state = self._get(session_id)
            state.student = self._load_side("student", student_container)
            state.record("revision_submitted")
            self._reanalyze(state)
            self.store.save(state)
            return state

    def chat(self, session_id: str, question: str) -> str:
        with self._lock_for(session_id):
            state = self._get(session_id)
            bundle = llm.build_chat_prompt(
                question,
                teacher=state.teacher,
                student=state.student,
                report=state.report,
                description=state.description,
            )
            reply = self.gateway.generate(bundle)
            state.record("chat", question=question, reply=reply)
            self.store.save(state)
            return reply

    def get_report(self, session_id: str) -> SessionState:
        with self._lock_for(session_id):
            return self._get(session_id)


# --------------------------------------------------------------------------
# batch evaluation
# --------------------------------------------------------------------------


def run_batch(corpus_dir: str | Path, diff_config: DiffConfig | None = None) -> list[dict]:
    """Evaluate every pair directory under the corpus root.

    A pair directory holds student.sb3 and teacher.sb3, optionally an
    expected.json descriptor of the seeded bug. Produces one row per pair:
    item count, whether the top item matches the seeded bug, diff latency,
    and iterations to reach the fixed point. Per-pair errors are recorded and
    the run continues.
    """
    root = Path(corpus_dir)
    rows: list[dict] = []
    pair_dirs = sorted(
        {p.parent for p in root.rglob("student.sb3") if (p.parent / "teacher.sb3").exists()}
    )
    for pair_dir in pair_dirs:
        name = str(pair_dir.relative_to(root))
        row: dict = {"pair": name}
        try:
            student = load_project(pair_dir.joinpath("student.sb3").read_bytes())
            teacher = load_project(pair_dir.joinpath("teacher.sb3").read_bytes())
            expected = None
            expected_path = pair_dir / "expected.json"
            if expected_path.exists():
                expected = json.loads(expected_path.read_text()).get("expected")

            start = time.perf_counter()
            teacher_norm = normalize(teacher)
            report = diff_normalized(normalize(student), teacher_norm, diff_config)
            row["diffLatencyMs"] = round((time.perf_counter() - start) * 1000, 2)
            row["itemCount"] = len(report.items)
            row["functionallyEquivalent"] = report.functionally_equivalent
            if expected and report.items:
                top = report.items[0]
                row["topMatchesSeeded"] = (
                    top.level == expected.get("level")
                    and top.kind in expected.get("kinds", [])
                    and top.location.sprite_name == expected.get("sprite")
                )
                row["seededPresent"] = any(
                    item.level == expected.get("level")
                    and item.kind in expected.get("kinds", [])
                    and item.location.sprite_name == expected.get("sprite")
                    for item in report.items
                )
            budget = len(report.items) + 2
            iterations = 0
            current = student
            while report.items and iterations < budget:
                item = report.items[0]
                patch = synthesize_patch(item, current, teacher, normalize(current), teacher_norm)
                current = apply_patch(current, patch)
                iterations += 1
                report = diff_normalized(normalize(current), teacher_norm, diff_config)
            row["iterationsToFixedPoint"] = iterations
            row["reachedFixedPoint"] = report.functionally_equivalent
            load_project(pack_project(current))
            row["finalReloads"] = True
        except Exception as exc:  # keep evaluating the rest of the corpus
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows
