"""HTTP interface to the rostering engine.

Serves one depot over a small JSON API bound to loopback: meta-plan
management, team building and checking, multi-day simulation, and staff
and statistics reads.  Solves that outlast a configurable threshold are
handed to a bounded worker pool and polled through ``/jobs/{id}``.
"""

from __future__ import annotations

import argparse
import logging
import os
import threading
import uuid
from concurrent.futures import Future, ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from typing import Any, Optional

from fastapi import FastAPI, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .engine import (
    RESOURCE_LIMIT,
    SOLVE_MODES,
    Assignment,
    InvalidInstanceError,
    explain_team,
    outcome_to_document,
    report_to_document,
    solve,
)
from .asp.solve import SolveLimits
from .model import (
    ERROR,
    DocumentError,
    ValidationIssue,
    iso_to_day,
    validate_instance,
)
from .simulate import day_result_to_document, simulate_window
from .store import (
    NightRestConfig,
    Snapshot,
    StoreError,
    instance_for_plans,
    load_snapshot,
    meta_plan_from_document,
    meta_plan_to_document,
    roll_forward,
    save_snapshot,
    statistics_rows,
)

LOG = logging.getLogger(__name__)

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8770
DEFAULT_ASYNC_THRESHOLD = 2.0
DEFAULT_WORKERS = 2

DEPOT_ENV = "PORTROSTER_DEPOT"


class ApiError(Exception):
    """An error with a fixed HTTP status and a structured body."""

    def __init__(self, status: int, code: str, message: str, issues=()):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.issues = list(issues)

    def body(self) -> dict:
        return {"code": self.code, "message": self.message, "issues": self.issues}


def _issue_document(issue: ValidationIssue) -> dict:
    return {
        "severity": issue.severity,
        "code": issue.code,
        "message": issue.message,
    }


class SolveRequest(BaseModel):
    metaPlanIds: list[str] = Field(default_factory=list)
    preAssignments: list[list[str]] = Field(default_factory=list)
    exclusions: list[list[str]] = Field(default_factory=list)
    mode: str = "auto"
    alternatives: int = Field(default=1, ge=1, le=16)


class CheckRequest(BaseModel):
    metaPlanIds: list[str] = Field(default_factory=list)
    team: list[Any] = Field(default_factory=list)


class SimulateRequest(BaseModel):
    startDate: str
    days: int = Field(default=1, ge=1, le=366)
    seedPlanGenerator: Optional[int] = None
    commit: bool = False


class DepotSession:
    """One depot per service process; writes go through a single lock."""

    def __init__(
        self,
        location,
        *,
        limits: SolveLimits = SolveLimits(),
        rest: NightRestConfig = NightRestConfig(),
    ):
        self.location = str(location)
        self.limits = limits
        self.rest = rest
        self._lock = threading.Lock()
        self._snapshot = load_snapshot(self.location)

    @property
    def snapshot(self) -> Snapshot:
        return self._snapshot

    def save(self, snapshot: Snapshot) -> Snapshot:
        with self._lock:
            self._snapshot = save_snapshot(snapshot, self.location)
            return self._snapshot


def _plan_day(snapshot: Snapshot, plan_ids) -> Optional[int]:
    days = []
    for plan_id in plan_ids:
        plan = snapshot.meta_plan(plan_id)
        if plan is None:
            raise ApiError(
                404, "unknown-meta-plan", "meta-plan %r is not in the depot" % plan_id
            )
        if plan.day is not None:
            days.append(plan.day)
    return min(days) if days else None


def _pairs(raw, what: str, width: int) -> tuple:
    out = []
    for entry in raw:
        if not isinstance(entry, (list, tuple)) or len(entry) != width:
            raise ApiError(
                409,
                "malformed-%s" % what,
                "%s entries must have %d fields, got %r" % (what, width, entry),
            )
        if not all(isinstance(x, str) for x in entry):
            raise ApiError(
                409, "malformed-%s" % what, "%s entries must be strings" % what
            )
        out.append(tuple(entry))
    return tuple(out)


def _solve_document(session: DepotSession, request: SolveRequest) -> dict:
    if request.mode not in SOLVE_MODES:
        raise ApiError(
            409,
            "invalid-mode",
            "mode must be one of %s" % ", ".join(SOLVE_MODES),
        )
    pre = _pairs(request.preAssignments, "pre-assignment", 3)
    exclusions = _pairs(request.exclusions, "exclusion", 2)
    snapshot = session.snapshot
    day = _plan_day(snapshot, request.metaPlanIds)
    if day is not None:
        snapshot = roll_forward(snapshot, day)
    instance = instance_for_plans(snapshot, request.metaPlanIds, pre, exclusions)
    try:
        outcome = solve(
            instance,
            mode=request.mode,
            alternatives=request.alternatives,
            limits=session.limits,
        )
    except InvalidInstanceError as err:
        raise ApiError(
            409,
            "invalid-instance",
            "instance validation failed",
            issues=[_issue_document(i) for i in err.issues],
        )
    if outcome.status == RESOURCE_LIMIT:
        raise ApiError(
            503,
            "resource-limit",
            "solver budget exhausted",
            issues=[{"message": d} for d in outcome.diagnostics],
        )
    return outcome_to_document(outcome)


def _check_document(session: DepotSession, request: CheckRequest) -> dict:
    triples = _pairs(request.team, "team", 3)
    snapshot = session.snapshot
    day = _plan_day(snapshot, request.metaPlanIds)
    if day is not None:
        snapshot = roll_forward(snapshot, day)
    instance = instance_for_plans(snapshot, request.metaPlanIds)
    try:
        report = explain_team(instance, Assignment(triples), limits=session.limits)
    except InvalidInstanceError as err:
        raise ApiError(
            409,
            "invalid-instance",
            "instance validation failed",
            issues=[_issue_document(i) for i in err.issues],
        )
    return report_to_document(report)


def create_app(
    depot,
    *,
    async_threshold: float = DEFAULT_ASYNC_THRESHOLD,
    workers: int = DEFAULT_WORKERS,
    limits: SolveLimits = SolveLimits(),
    rest: NightRestConfig = NightRestConfig(),
) -> FastAPI:
    """Build the service around one depot file."""
    if workers < 1:
        raise ValueError("worker pool must have at least one worker")
    if async_threshold < 0:
        raise ValueError("async threshold must be non-negative")
    session = DepotSession(depot, limits=limits, rest=rest)
    pool = ThreadPoolExecutor(max_workers=workers)
    jobs: dict[str, Future] = {}
    jobs_lock = threading.Lock()

    app = FastAPI(title="portroster", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def _api_error(_, exc: ApiError):
        return JSONResponse(exc.body(), status_code=exc.status)

    @app.exception_handler(RequestValidationError)
    async def _bad_request(_, exc: RequestValidationError):
        issues = [
            {"code": "bad-request", "message": str(e.get("msg", e))}
            for e in exc.errors()
        ]
        body = {
            "code": "bad-request",
            "message": "request body failed validation",
            "issues": issues,
        }
        return JSONResponse(body, status_code=400)

    @app.get("/metaplans")
    def get_metaplans():
        snapshot = session.snapshot
        plans = sorted(
            snapshot.meta_plans, key=lambda p: (p.day is None, p.day, p.id)
        )
        return {
            "metaPlans": [meta_plan_to_document(p) for p in plans],
            "revision": snapshot.revision,
        }

    @app.put("/metaplans/{plan_id}")
    def put_metaplan(plan_id: str, document: dict, response: Response):
        document = dict(document)
        document.setdefault("id", plan_id)
        if document["id"] != plan_id:
            raise ApiError(
                409,
                "id-mismatch",
                "document id %r does not match path id %r"
                % (document["id"], plan_id),
            )
        try:
            plan = meta_plan_from_document(document)
        except DocumentError as err:
            raise ApiError(409, "invalid-meta-plan", str(err))
        snapshot = session.snapshot
        existing = snapshot.meta_plan(plan_id)
        kept = tuple(p for p in snapshot.meta_plans if p.id != plan_id)
        candidate = Snapshot(
            instance=snapshot.instance,
            meta_plans=kept + (plan,),
            committed_plans=snapshot.committed_plans,
            revision=snapshot.revision,
        )
        issues = [
            i
            for i in validate_instance(instance_for_plans(candidate, [plan_id]))
            if i.severity == ERROR
        ]
        if issues:
            raise ApiError(
                409,
                "invalid-meta-plan",
                "meta-plan fails validation",
                issues=[_issue_document(i) for i in issues],
            )
        try:
            saved = session.save(candidate)
        except StoreError as err:
            raise ApiError(409, "depot-conflict", str(err))
        response.status_code = 200 if existing is not None else 201
        return {"metaPlan": meta_plan_to_document(plan), "revision": saved.revision}

    @app.delete("/metaplans/{plan_id}")
    def delete_metaplan(plan_id: str):
        snapshot = session.snapshot
        if snapshot.meta_plan(plan_id) is None:
            raise ApiError(
                404, "unknown-meta-plan", "meta-plan %r is not in the depot" % plan_id
            )
        kept = tuple(p for p in snapshot.meta_plans if p.id != plan_id)
        try:
            session.save(
                Snapshot(
                    instance=snapshot.instance,
                    meta_plans=kept,
                    committed_plans=snapshot.committed_plans,
                    revision=snapshot.revision,
                )
            )
        except StoreError as err:
            raise ApiError(409, "depot-conflict", str(err))
        return Response(status_code=204)

    @app.get("/staff")
    def get_staff():
        staff = [
            {
                "id": e.id,
                "skills": sorted(e.skills),
                "absences": sorted(e.absences),
                "available": not e.absences,
            }
            for e in session.snapshot.instance.employees
        ]
        return {"staff": staff}

    @app.get("/stats")
    def get_stats():
        return {"rows": statistics_rows(session.snapshot)}

    @app.post("/solve")
    def post_solve(request: SolveRequest):
        future = pool.submit(_solve_document, session, request)
        try:
            return future.result(timeout=async_threshold)
        except FutureTimeoutError:
            job_id = uuid.uuid4().hex[:12]
            with jobs_lock:
                jobs[job_id] = future
            LOG.info("solve handed to job %s", job_id)
            return JSONResponse(
                {"jobId": job_id, "status": "running"}, status_code=202
            )

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        with jobs_lock:
            future = jobs.get(job_id)
        if future is None:
            raise ApiError(404, "unknown-job", "no job %r" % job_id)
        if not future.done():
            return {"jobId": job_id, "status": "running"}
        result = future.result()  # ApiError propagates to the handler
        return {"jobId": job_id, "status": "done", "result": result}

    @app.post("/check")
    def post_check(request: CheckRequest):
        return _check_document(session, request)

    @app.post("/simulate")
    def post_simulate(request: SimulateRequest):
        try:
            start = iso_to_day(request.startDate, "startDate")
        except DocumentError as err:
            raise ApiError(409, "invalid-date", str(err))
        try:
            result = simulate_window(
                session.snapshot,
                start,
                request.days,
                generator_seed=request.seedPlanGenerator,
                rest=session.rest,
                limits=session.limits,
            )
        except InvalidInstanceError as err:
            raise ApiError(
                409,
                "invalid-instance",
                "a day plan fails validation",
                issues=[_issue_document(i) for i in err.issues],
            )
        revision = session.snapshot.revision
        if request.commit:
            try:
                revision = session.save(result.snapshot).revision
            except StoreError as err:
                raise ApiError(409, "depot-conflict", str(err))
        return {
            "perDayOutcomes": [day_result_to_document(d) for d in result.days],
            "aggregateStats": result.aggregate_stats(),
            "committed": request.commit,
            "revision": revision,
        }

    return app


def build_app() -> FastAPI:
    """Factory for ``uvicorn portroster.service:build_app --factory``."""
    return create_app(os.environ.get(DEPOT_ENV, "depot.json"))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="portroster-service", description="serve a roster depot over HTTP"
    )
    parser.add_argument("--depot", required=True, help="depot snapshot file")
    parser.add_argument("--host", default=DEFAULT_HOST)
    parser.add_argument("--port", type=int, default=DEFAULT_PORT)
    parser.add_argument(
        "--async-threshold",
        type=float,
        default=DEFAULT_ASYNC_THRESHOLD,
        help="seconds before a solve becomes a polled job",
    )
    parser.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    args = parser.parse_args(argv)

    import uvicorn

    logging.basicConfig(level=logging.INFO)
    app = create_app(
        args.depot, async_threshold=args.async_threshold, workers=args.workers
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
