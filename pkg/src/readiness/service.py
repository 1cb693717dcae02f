"""JSON-over-HTTP API fronting the catalog, scoring engine, reports and
session store; the live recomputation loop behind the assessment UI.

Stateless scoring calls run freely in parallel; per-session mutation is
serialized by the store's locks. Identity is a plain username (request body
or X-Assessor header), mirroring the track-record login notion. Timestamps
come from the injected clock so tests stay deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Mapping, Sequence

from fastapi import FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .catalog import Catalog, NodeKind, catalog_to_dict
from .report import advice_for, advice_to_dict, histogram, histogram_to_dict
from .scoring import (
    Assessment,
    IncompleteAssessmentError,
    ScoreReport,
    ScoringError,
    format_fraction,
    report_to_dict,
    rollup,
)
from .session import (
    Session,
    SessionError,
    SessionStore,
    UnknownSessionError,
    format_timestamp,
)

Clock = Callable[[], datetime]


def now_utc() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class ApiError(Exception):
    """Error shape sent over the wire; codes are a stable enumeration."""

    http_status: int
    code: str  # bad_request | not_found | validation_failed | conflict | internal
    message: str
    details: object = None

    def to_response(self) -> JSONResponse:
        body: dict = {"error": {"code": self.code, "message": self.message}}
        if self.details is not None:
            body["error"]["details"] = self.details
        return JSONResponse(status_code=self.http_status, content=body)


def live_rescore(catalog: Catalog, scores: Mapping[str, int]) -> ScoreReport:
    """Partial-mode rollup of an in-progress draft; nothing is persisted.
    Once every leaf is scored this equals the strict rollup exactly."""
    assessment = Assessment(
        catalog_name=catalog.name, catalog_version=catalog.version, scores=scores
    )
    return rollup(catalog, assessment, partial=True)


class CreateSessionRequest(BaseModel):
    user: str | None = None


class FinishRequest(BaseModel):
    partial: bool = False


def _error_from_exception(exc: Exception) -> ApiError:
    if isinstance(exc, UnknownSessionError):
        return ApiError(404, "not_found", str(exc), {"session_id": exc.session_id})
    if isinstance(exc, IncompleteAssessmentError):
        return ApiError(
            422, "validation_failed", str(exc), {"unscored_leaves": exc.missing}
        )
    if isinstance(exc, ScoringError):
        details = None
        if hasattr(exc, "leaf_ids"):
            details = {"leaf_ids": exc.leaf_ids}
        elif hasattr(exc, "leaf_id"):
            details = {"leaf_id": exc.leaf_id}
        return ApiError(422, "validation_failed", str(exc), details)
    if isinstance(exc, SessionError):
        return ApiError(422, "validation_failed", str(exc))
    return ApiError(500, "internal", "internal error")


def _session_summary(session: Session) -> dict:
    return {
        "session_id": session.session_id,
        "user": session.user,
        "catalog": {"name": session.catalog_name, "version": session.catalog_version},
        "created_at": format_timestamp(session.created_at),
        "updated_at": format_timestamp(session.updated_at),
        "experiments": len(session.experiments),
    }


def _experiment_summary(experiment) -> dict:
    grade = None
    grade_num = grade_den = None
    if experiment.result.overall is not None:
        achievement = experiment.result.overall.achievement
        grade = format_fraction(achievement)
        grade_num, grade_den = achievement.numerator, achievement.denominator
    return {
        "index": experiment.index,
        "started_at": format_timestamp(experiment.started_at),
        "finished_at": format_timestamp(experiment.finished_at),
        "duration_minutes": format_fraction(experiment.duration_minutes),
        "complete": experiment.result.complete,
        "grade": grade,
        "grade_num": grade_num,
        "grade_den": grade_den,
    }


def _report_payload(report: ScoreReport, catalog: Catalog) -> dict:
    payload = report_to_dict(report)
    payload["advice"] = advice_to_dict(advice_for(report, catalog), catalog)
    return payload


def create_app(
    catalog: Catalog,
    store: SessionStore,
    *,
    cors_origins: Sequence[str] = ("*",),
    clock: Clock = now_utc,
) -> FastAPI:
    """Build the application around one catalog and one session store."""
    app = FastAPI(title="compliance-readiness", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    catalog_doc = catalog_to_dict(catalog)

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return exc.to_response()

    @app.exception_handler(RequestValidationError)
    async def handle_request_validation(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        if any(e.get("type") == "json_invalid" for e in errors):
            return ApiError(400, "bad_request", "request body is not valid JSON").to_response()
        details = [
            {"loc": [str(part) for part in e.get("loc", ())], "msg": e.get("msg", "")}
            for e in errors
        ]
        return ApiError(
            422, "validation_failed", "request validation failed", details
        ).to_response()

    @app.exception_handler(Exception)
    async def handle_unexpected(request: Request, exc: Exception):
        # never let a traceback cross the wire
        return _error_from_exception(exc).to_response()

    def run(operation: Callable[[], object]) -> object:
        try:
            return operation()
        except (ScoringError, SessionError) as exc:
            raise _error_from_exception(exc) from exc

    def get_session_or_404(session_id: str) -> Session:
        try:
            return store.get_session(session_id)
        except UnknownSessionError as exc:
            raise _error_from_exception(exc) from exc

    @app.get("/api/catalog")
    def get_catalog():
        return catalog_doc

    @app.post("/api/sessions", status_code=201)
    def create_session(
        body: CreateSessionRequest | None = None,
        x_assessor: str | None = Header(default=None),
    ):
        user = (body.user if body else None) or x_assessor
        if not user or not user.strip():
            raise ApiError(
                422,
                "validation_failed",
                "a user name is required (body field 'user' or X-Assessor header)",
            )
        session = run(lambda: store.create_session(user, catalog.ref, clock()))
        return _session_summary(session)

    @app.get("/api/sessions")
    def list_sessions():
        return {"sessions": store.list_sessions()}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        session = get_session_or_404(session_id)
        payload = _session_summary(session)
        payload["draft_scores"] = dict(session.draft_scores)
        payload["experiments"] = [
            _experiment_summary(e) for e in session.experiments
        ]
        return payload

    @app.put("/api/sessions/{session_id}/scores")
    def put_scores(session_id: str, scores: dict[str, int]):
        session = get_session_or_404(session_id)
        merged = dict(session.draft_scores)
        merged.update(scores)
        report = run(lambda: live_rescore(catalog, merged))  # validates first
        session = run(lambda: store.update_draft(session_id, scores, clock()))
        return {
            "draft_scores": dict(session.draft_scores),
            "report": _report_payload(report, catalog),
        }

    @app.delete("/api/sessions/{session_id}/scores/{leaf_id}")
    def delete_score(session_id: str, leaf_id: str):
        session = run(lambda: store.remove_draft_score(session_id, leaf_id, clock()))
        report = run(lambda: live_rescore(catalog, session.draft_scores))
        return {
            "draft_scores": dict(session.draft_scores),
            "report": _report_payload(report, catalog),
        }

    @app.post("/api/sessions/{session_id}/finish")
    def finish_experiment(session_id: str, body: FinishRequest | None = None):
        partial = bool(body and body.partial)
        session = get_session_or_404(session_id)
        assessment = Assessment(
            catalog_name=catalog.name,
            catalog_version=catalog.version,
            scores=dict(session.draft_scores),
        )
        finished_at = clock()
        started_at = session.draft_started_at or finished_at
        experiment = run(
            lambda: store.record_experiment(
                session_id,
                catalog,
                assessment,
                started_at,
                finished_at,
                partial=partial,
            )
        )
        return {
            "experiment": _experiment_summary(experiment),
            "report": _report_payload(experiment.result, catalog),
        }

    @app.get("/api/sessions/{session_id}/report")
    def get_report(
        session_id: str, mode: str = "live", experiment: int | None = None
    ):
        session = get_session_or_404(session_id)
        if experiment is not None:
            stored = _find_experiment(session, experiment)
            return _report_payload(stored.result, catalog)
        if mode != "live":
            raise ApiError(
                400, "bad_request", f"unknown report mode {mode!r}; use 'live' "
                "or pass ?experiment=<n>"
            )
        report = run(lambda: live_rescore(catalog, session.draft_scores))
        return _report_payload(report, catalog)

    @app.get("/api/sessions/{session_id}/progression")
    def get_progression(session_id: str):
        get_session_or_404(session_id)
        rows = []
        for entry in store.progression(session_id):
            row = {
                "index": entry.index,
                "finished_at": format_timestamp(entry.finished_at),
                "grade": None,
                "grade_num": None,
                "grade_den": None,
                "delta": None,
                "delta_num": None,
                "delta_den": None,
            }
            if entry.achievement is not None:
                row["grade"] = format_fraction(entry.achievement)
                row["grade_num"] = entry.achievement.numerator
                row["grade_den"] = entry.achievement.denominator
            if entry.delta is not None:
                sign = "+" if entry.delta >= 0 else ""
                row["delta"] = sign + format_fraction(entry.delta)
                row["delta_num"] = entry.delta.numerator
                row["delta_den"] = entry.delta.denominator
            rows.append(row)
        return {"session_id": session_id, "rows": rows}

    @app.get("/api/sessions/{session_id}/histogram")
    def get_histogram(
        session_id: str, level: str = "domain", experiment: int | None = None
    ):
        session = get_session_or_404(session_id)
        try:
            kind = NodeKind(level)
        except ValueError:
            raise ApiError(
                422, "validation_failed", f"unknown histogram level {level!r}"
            ) from None
        if kind not in (NodeKind.DOMAIN, NodeKind.CONTROL):
            raise ApiError(
                422,
                "validation_failed",
                f"unsupported histogram level {level!r}; use 'domain' or 'control'",
            )
        if experiment is not None:
            report = _find_experiment(session, experiment).result
        else:
            report = run(lambda: live_rescore(catalog, session.draft_scores))
        series = histogram(report, catalog, kind)
        return histogram_to_dict(series)

    def _find_experiment(session: Session, index: int):
        for experiment in session.experiments:
            if experiment.index == index:
                return experiment
        raise ApiError(
            404,
            "not_found",
            f"session {session.session_id!r} has no experiment {index}",
            {"experiments": len(session.experiments)},
        )

    return app


def run_server(
    catalog: Catalog,
    store: SessionStore,
    *,
    host: str = "127.0.0.1",
    port: int = 8402,
    cors_origins: Sequence[str] = ("*",),
) -> None:
    """Serve until interrupted; uvicorn handles graceful signal shutdown."""
    import uvicorn

    app = create_app(catalog, store, cors_origins=cors_origins)
    uvicorn.run(app, host=host, port=port, log_level="info")
