"""Assessment session tracking: who assessed, how many experiments, and how
the grade progressed between them.

Storage is one append-only JSON-Lines file per session (a header line, then
draft and experiment events) plus a rewritten index.json summarizing the
store. The active draft is the most recent draft line after the last
experiment line, so finishing an experiment implicitly resets the draft and
history is never rewritten. Timestamps are supplied by the caller (second
precision, RFC-3339 UTC) so behavior is deterministic under test.

Concurrency: one writer per session (enforced with in-process locks);
any number of concurrent readers.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from .catalog import Catalog
from .scoring import (
    Assessment,
    ScoreReport,
    report_from_dict,
    report_to_dict,
    rollup,
)

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


class SessionError(ValueError):
    """Base error for session creation, lookup and recording."""


class UnknownSessionError(SessionError):
    def __init__(self, session_id: str):
        super().__init__(f"unknown session {session_id!r}")
        self.session_id = session_id


class ClockInversionError(SessionError):
    """An experiment finished before it started."""


def format_timestamp(moment: datetime) -> str:
    """RFC-3339 UTC at second precision, e.g. 2026-08-10T12:00:00Z."""
    if moment.tzinfo is None:
        raise SessionError(f"timestamp {moment!r} must be timezone-aware")
    return moment.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def parse_timestamp(text: str) -> datetime:
    try:
        return datetime.strptime(text, TIMESTAMP_FORMAT).replace(tzinfo=timezone.utc)
    except ValueError as exc:
        raise SessionError(f"bad timestamp {text!r}: {exc}") from exc


@dataclass(frozen=True)
class Experiment:
    """One frozen pass over the catalog: the answers and their rollup."""

    index: int
    started_at: datetime
    finished_at: datetime
    assessment: Assessment
    result: ScoreReport

    @property
    def duration_minutes(self) -> Fraction:
        seconds = int((self.finished_at - self.started_at).total_seconds())
        return Fraction(seconds, 60)


@dataclass
class Session:
    """A user's persisted assessment track record."""

    session_id: str
    user: str
    catalog_name: str
    catalog_version: str
    created_at: datetime
    updated_at: datetime
    experiments: list[Experiment] = field(default_factory=list)
    draft_scores: dict[str, int] = field(default_factory=dict)
    draft_started_at: datetime | None = None

    @property
    def catalog_ref(self) -> tuple[str, str]:
        return (self.catalog_name, self.catalog_version)


@dataclass(frozen=True)
class ProgressionEntry:
    index: int
    finished_at: datetime
    achievement: Fraction | None
    delta: Fraction | None


class SessionStore:
    """File-backed store: <dir>/<session_id>.jsonl plus <dir>/index.json."""

    def __init__(self, directory: Path | str):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._index_lock = threading.Lock()

    # -- paths and locks --

    def _session_path(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.jsonl"

    def _index_path(self) -> Path:
        return self.directory / "index.json"

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    # -- public API --

    def create_session(
        self, user: str, catalog_ref: tuple[str, str], created_at: datetime
    ) -> Session:
        """Persist an empty session and return it."""
        if not user or not user.strip():
            raise SessionError("user name must be non-empty")
        session_id = uuid.uuid4().hex
        while self._session_path(session_id).exists():
            session_id = uuid.uuid4().hex
        header = {
            "type": "session",
            "session_id": session_id,
            "user": user,
            "catalog": {"name": catalog_ref[0], "version": catalog_ref[1]},
            "created_at": format_timestamp(created_at),
        }
        with self._lock_for(session_id):
            self._append_line(session_id, header)
        session = self.get_session(session_id)
        self._update_index(session)
        return session

    def get_session(self, session_id: str) -> Session:
        """Replay a session's event log into its current state."""
        path = self._session_path(session_id)
        if not path.exists():
            raise UnknownSessionError(session_id)
        session: Session | None = None
        with path.open(encoding="utf-8") as fh:
            for line_number, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                event = json.loads(line)
                if event["type"] == "session":
                    created = parse_timestamp(event["created_at"])
                    session = Session(
                        session_id=event["session_id"],
                        user=event["user"],
                        catalog_name=event["catalog"]["name"],
                        catalog_version=event["catalog"]["version"],
                        created_at=created,
                        updated_at=created,
                    )
                elif session is None:
                    raise SessionError(
                        f"{path.name}:{line_number}: event before session header"
                    )
                elif event["type"] == "draft":
                    updated = parse_timestamp(event["updated_at"])
                    if not session.draft_scores and event["scores"]:
                        session.draft_started_at = updated
                    session.draft_scores = dict(event["scores"])
                    if not session.draft_scores:
                        session.draft_started_at = None
                    session.updated_at = max(session.updated_at, updated)
                elif event["type"] == "experiment":
                    experiment = self._experiment_from_event(session, event)
                    session.experiments.append(experiment)
                    # an experiment consumes the draft
                    session.draft_scores = {}
                    session.draft_started_at = None
                    session.updated_at = max(session.updated_at, experiment.finished_at)
                else:
                    raise SessionError(
                        f"{path.name}:{line_number}: unknown event type "
                        f"{event['type']!r}"
                    )
        if session is None:
            raise SessionError(f"{path.name}: no session header")
        return session

    def list_sessions(self) -> list[dict]:
        """Index entries sorted by creation time then id."""
        path = self._index_path()
        if not path.exists():
            return []
        index = json.loads(path.read_text(encoding="utf-8"))
        entries = [
            {"session_id": session_id, **entry}
            for session_id, entry in index.get("sessions", {}).items()
        ]
        entries.sort(key=lambda e: (e["created_at"], e["session_id"]))
        return entries

    def update_draft(
        self, session_id: str, scores: dict[str, int], updated_at: datetime
    ) -> Session:
        """Merge scores into the working draft. A no-op merge appends nothing,
        so re-sending the same scores leaves a single persisted state."""
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            merged = dict(session.draft_scores)
            merged.update(scores)
            if merged != session.draft_scores:
                self._append_line(
                    session_id,
                    {
                        "type": "draft",
                        "updated_at": format_timestamp(updated_at),
                        "scores": merged,
                    },
                )
            session = self.get_session(session_id)
        self._update_index(session)
        return session

    def remove_draft_score(
        self, session_id: str, leaf_id: str, updated_at: datetime
    ) -> Session:
        """Drop one answer from the working draft (no-op if absent)."""
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            if leaf_id in session.draft_scores:
                remaining = {
                    k: v for k, v in session.draft_scores.items() if k != leaf_id
                }
                self._append_line(
                    session_id,
                    {
                        "type": "draft",
                        "updated_at": format_timestamp(updated_at),
                        "scores": remaining,
                    },
                )
                session = self.get_session(session_id)
        self._update_index(session)
        return session

    def record_experiment(
        self,
        session_id: str,
        catalog: Catalog,
        assessment: Assessment,
        started_at: datetime,
        finished_at: datetime,
        *,
        partial: bool = False,
    ) -> Experiment:
        """Append the next experiment: roll the assessment up against the
        session's catalog and persist answers and result together. The write
        is flushed and fsynced before returning."""
        if finished_at < started_at:
            raise ClockInversionError(
                f"experiment finished at {format_timestamp(finished_at)} "
                f"before it started at {format_timestamp(started_at)}"
            )
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            if session.catalog_ref != catalog.ref:
                raise SessionError(
                    f"session {session_id!r} tracks catalog "
                    f"{session.catalog_name!r} v{session.catalog_version}, "
                    f"not {catalog.name!r} v{catalog.version}"
                )
            result = rollup(catalog, assessment, partial=partial)
            experiment = Experiment(
                index=len(session.experiments) + 1,
                started_at=started_at,
                finished_at=finished_at,
                assessment=assessment,
                result=result,
            )
            self._append_line(
                session_id,
                {
                    "type": "experiment",
                    "index": experiment.index,
                    "started_at": format_timestamp(started_at),
                    "finished_at": format_timestamp(finished_at),
                    "scores": dict(assessment.scores),
                    "result": report_to_dict(result),
                },
            )
            session = self.get_session(session_id)
        self._update_index(session)
        return experiment

    def progression(self, session_id: str) -> list[ProgressionEntry]:
        """Grade per experiment with the exact delta from the previous one."""
        session = self.get_session(session_id)
        entries: list[ProgressionEntry] = []
        previous: Fraction | None = None
        for experiment in session.experiments:
            achievement = (
                experiment.result.overall.achievement
                if experiment.result.overall
                else None
            )
            delta = None
            if previous is not None and achievement is not None:
                delta = achievement - previous
            entries.append(
                ProgressionEntry(
                    index=experiment.index,
                    finished_at=experiment.finished_at,
                    achievement=achievement,
                    delta=delta,
                )
            )
            if achievement is not None:
                previous = achievement
        return entries

    # -- internals --

    def _experiment_from_event(self, session: Session, event: dict) -> Experiment:
        assessment = Assessment(
            catalog_name=session.catalog_name,
            catalog_version=session.catalog_version,
            scores=dict(event["scores"]),
        )
        return Experiment(
            index=event["index"],
            started_at=parse_timestamp(event["started_at"]),
            finished_at=parse_timestamp(event["finished_at"]),
            assessment=assessment,
            result=report_from_dict(event["result"]),
        )

    def _append_line(self, session_id: str, event: dict) -> None:
        path = self._session_path(session_id)
        payload = json.dumps(event, ensure_ascii=False) + "\n"
        with path.open("a", encoding="utf-8") as fh:
            fh.write(payload)
            fh.flush()
            os.fsync(fh.fileno())

    def _update_index(self, session: Session) -> None:
        with self._index_lock:
            path = self._index_path()
            index = {"sessions": {}}
            if path.exists():
                index = json.loads(path.read_text(encoding="utf-8"))
            index.setdefault("sessions", {})[session.session_id] = {
                "user": session.user,
                "catalog": {
                    "name": session.catalog_name,
                    "version": session.catalog_version,
                },
                "created_at": format_timestamp(session.created_at),
                "updated_at": format_timestamp(session.updated_at),
                "experiments": len(session.experiments),
            }
            tmp = path.with_suffix(".json.tmp")
            tmp.write_text(
                json.dumps(index, indent=2, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
            os.replace(tmp, path)
