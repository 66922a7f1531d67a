"""HTTP facade: accounts, bootstrap jobs, registration, challenges, resources.

The wire contract, in one table:

    POST /accounts                         -> {account_id}
    POST /accounts/{id}/bootstrap          -> 202 {job_id}
    GET  /accounts/{id}/bootstrap/{job}    -> {status, results_so_far, skipped}
    POST /accounts/{id}/registration       -> 201 {account_id, registered}
    POST /accounts/{id}/sessions           -> {session_id, grid, consequence}
    POST /sessions/{sid}/moves             -> {transcript_len}
    POST /sessions/{sid}/submit            -> {status, failures, locked}
    GET  /resources/{rid}?session={sid}    -> 200 content stub or 403
    GET  /accounts/{id}/faces              -> {faces: [index entries]}
    GET  /accounts/{id}/faces/{image}.png  -> PNG crop render

Errors use one envelope: {"error": {"code", "message"}}. The consequence
attached to a session is echoed back so a client can (and must) show it
before entry; an accepted session unlocks only resources gated on the same
consequence.
"""

import io
import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .authn import ACCEPTED, CONSEQUENCES, DEFAULT_SESSION_TTL_SECS
from .bootstrap.pipeline import (
    MODE_DETECTOR,
    MODE_TAGS,
    BootstrapOutcome,
    PipelineConfig,
    collect_events,
    load_face_index,
    load_friends_file,
    run_pipeline,
    scan_corpus,
    write_face_index,
)
from .bootstrap.ppm import read_ppm
from .errors import GridlockError, NotFoundError, ValidationError
from .grid import Move
from .store import AccountStore

DEFAULT_LISTEN_ADDR = "127.0.0.1:8080"
DEFAULT_DATA_DIR = "./data"


@dataclass(frozen=True)
class GatedResource:
    resource_id: str
    title: str
    consequence_required: str


DEFAULT_RESOURCES = (
    GatedResource("library", "Purchased content library", "access"),
    GatedResource("rental-001", "Premium rental checkout", "payment"),
)


@dataclass
class ServiceConfig:
    data_dir: Path = Path(DEFAULT_DATA_DIR)
    session_ttl_secs: float = DEFAULT_SESSION_TTL_SECS
    bootstrap_workers: int = 4

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            data_dir=Path(os.environ.get("DATA_DIR", DEFAULT_DATA_DIR)),
            session_ttl_secs=float(
                os.environ.get("SESSION_TTL_SECS", DEFAULT_SESSION_TTL_SECS)
            ),
        )


@dataclass
class BootstrapJob:
    job_id: str
    account_id: str
    status: str = "running"
    outcome: BootstrapOutcome = field(default_factory=BootstrapOutcome)
    error: Optional[str] = None
    guard: threading.Lock = field(default_factory=threading.Lock)

    def snapshot(self) -> dict:
        with self.guard:
            return {
                "status": self.status,
                "results_so_far": sorted(
                    (f.to_index_entry() for f in self.outcome.faces),
                    key=lambda e: e["image_id"],
                ),
                "skipped": [s.to_dict() for s in self.outcome.skipped],
                "error": self.error,
            }


class ServiceState:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = AccountStore(config.data_dir)
        self.sessions: dict[str, str] = self.store.session_index()
        self.jobs: dict[str, BootstrapJob] = {}
        self.resources = self._load_resources()

    def _load_resources(self) -> dict[str, GatedResource]:
        catalog = list(DEFAULT_RESOURCES)
        override = self.config.data_dir / "resources.json"
        if override.exists():
            entries = json.loads(override.read_text())
            catalog = [
                GatedResource(e["resource_id"], e["title"], e["consequence"])
                for e in entries
            ]
        return {r.resource_id: r for r in catalog}


# -- request bodies ----------------------------------------------------------


class BootstrapRequest(BaseModel):
    mode: str
    manifest: Optional[str] = None
    corpus: Optional[str] = None
    friends: Optional[str] = None
    workers: Optional[int] = None


class RegistrationRequest(BaseModel):
    image_ids: list[str]
    secret: list[str]


class SessionRequest(BaseModel):
    consequence: str
    seed: Optional[int] = None


class MoveRequest(BaseModel):
    axis: str
    index: int
    delta: int


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    state = ServiceState(config)
    app = FastAPI(title="gridlock", version="0.1.0")
    app.state.gridlock = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(GridlockError)
    def _domain_error(_req: Request, exc: GridlockError):
        return _error_response(exc.http_status, exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    def _body_error(_req: Request, exc: RequestValidationError):
        return _error_response(400, "VALIDATION", str(exc))

    def account_of_session(session_id: str) -> str:
        account_id = state.sessions.get(session_id)
        if account_id is None:
            raise NotFoundError(f"unknown session {session_id!r}")
        return account_id

    # -- accounts ------------------------------------------------------------

    @app.post("/accounts")
    def create_account():
        account = state.store.create()
        return {"account_id": account.account_id}

    @app.post("/accounts/{account_id}/registration", status_code=201)
    def create_registration(account_id: str, body: RegistrationRequest):
        with state.store.lock(account_id):
            account = state.store.get(account_id)
            account.set_registration(body.image_ids, body.secret)
            state.store.save(account)
        return {"account_id": account_id, "registered": True}

    # -- bootstrap jobs --------------------------------------------------------

    def _run_bootstrap(job: BootstrapJob, body: BootstrapRequest, faces_dir: Path):
        workers = body.workers or state.config.bootstrap_workers
        try:
            if body.mode == MODE_TAGS:
                if not body.manifest:
                    raise ValidationError("jill mode needs a manifest path")
                from .bootstrap.manifest import load_tag_manifest, tag_events

                entries = load_tag_manifest(body.manifest)
                events = tag_events(entries, faces_dir, workers)
            else:
                if body.friends:
                    friends = load_friends_file(body.friends)
                elif body.corpus:
                    friends = scan_corpus(body.corpus)
                else:
                    raise ValidationError("jack mode needs a corpus or friends path")
                pipeline_config = PipelineConfig(
                    mode=MODE_DETECTOR, output_dir=faces_dir, workers=workers
                )
                events = run_pipeline(pipeline_config, friends)
            seen: list = []
            for event in events:
                seen.append(event)
                with job.guard:
                    if event.face is not None:
                        job.outcome.faces.append(event.face)
                    elif event.skip is not None:
                        job.outcome.skipped.append(event.skip)
            final = collect_events(seen)
            with job.guard:
                job.outcome = final
            index_path = write_face_index(faces_dir, final.faces)
            with state.store.lock(job.account_id):
                account = state.store.get(job.account_id)
                account.face_index_path = str(index_path)
                state.store.save(account)
            with job.guard:
                job.status = "done"
        except Exception as exc:  # noqa: BLE001  - job must end in a terminal state
            with job.guard:
                job.status = "failed"
                job.error = f"{type(exc).__name__}: {exc}"

    @app.post("/accounts/{account_id}/bootstrap", status_code=202)
    def start_bootstrap(account_id: str, body: BootstrapRequest):
        state.store.get(account_id)
        if body.mode not in (MODE_TAGS, MODE_DETECTOR):
            raise ValidationError(f"mode must be jack or jill, got {body.mode!r}")
        job = BootstrapJob(job_id=uuid.uuid4().hex[:12], account_id=account_id)
        state.jobs[job.job_id] = job
        faces_dir = state.store.faces_dir(account_id)
        worker = threading.Thread(
            target=_run_bootstrap, args=(job, body, faces_dir), daemon=True
        )
        worker.start()
        return {"job_id": job.job_id}

    @app.get("/accounts/{account_id}/bootstrap/{job_id}")
    def bootstrap_status(account_id: str, job_id: str):
        job = state.jobs.get(job_id)
        if job is None or job.account_id != account_id:
            raise NotFoundError(f"unknown bootstrap job {job_id!r}")
        return job.snapshot()

    @app.get("/accounts/{account_id}/faces")
    def face_index(account_id: str):
        account = state.store.get(account_id)
        if account.face_index_path is None:
            return {"faces": []}
        return {"faces": load_face_index(account.face_index_path)}

    @app.get("/accounts/{account_id}/faces/{image_id}.png")
    def face_crop_png(account_id: str, image_id: str):
        account = state.store.get(account_id)
        if account.face_index_path is None:
            raise NotFoundError("account has no bootstrapped faces")
        index_dir = Path(account.face_index_path).parent
        entry = next(
            (e for e in load_face_index(account.face_index_path) if e["image_id"] == image_id),
            None,
        )
        if entry is None:
            raise NotFoundError(f"unknown face {image_id!r}")
        from PIL import Image

        pixels = read_ppm(index_dir / entry["crop_path"])
        buffer = io.BytesIO()
        Image.fromarray(pixels).save(buffer, format="PNG")
        return Response(content=buffer.getvalue(), media_type="image/png")

    # -- challenge lifecycle ---------------------------------------------------

    @app.post("/accounts/{account_id}/sessions")
    def create_session(account_id: str, body: SessionRequest):
        seed = body.seed
        if seed is None:
            seed = int.from_bytes(os.urandom(8), "big")
        with state.store.lock(account_id):
            account = state.store.get(account_id)
            session = account.start_session(seed, body.consequence)
            state.store.save(account)
            state.sessions[session.session_id] = account_id
        return {
            "session_id": session.session_id,
            "grid": list(session.initial_cells),
            "consequence": session.consequence,
        }

    @app.post("/sessions/{session_id}/moves")
    def record_move(session_id: str, body: MoveRequest):
        account_id = account_of_session(session_id)
        move = Move(body.axis, body.index, body.delta)
        with state.store.lock(account_id):
            account = state.store.get(account_id)
            try:
                session = account.record_move(
                    session_id, move, ttl=state.config.session_ttl_secs
                )
            finally:
                state.store.save(account)
        # The client view re-syncs from this grid: the server replay is
        # authoritative, a drifted client cannot render a state it never sent.
        return {
            "transcript_len": len(session.transcript),
            "grid": list(session.current_grid().cells),
        }

    @app.post("/sessions/{session_id}/submit")
    def submit(session_id: str):
        account_id = account_of_session(session_id)
        with state.store.lock(account_id):
            account = state.store.get(account_id)
            try:
                outcome = account.submit(session_id, ttl=state.config.session_ttl_secs)
            finally:
                state.store.save(account)
        return outcome

    # -- gated resources --------------------------------------------------------

    @app.get("/resources/{resource_id}")
    def gated_resource(resource_id: str, session: Optional[str] = None):
        resource = state.resources.get(resource_id)
        if resource is None:
            raise NotFoundError(f"unknown resource {resource_id!r}")
        if not session:
            return _error_response(403, "SESSION_STATE", "resource requires a session")
        account_id = state.sessions.get(session)
        if account_id is None:
            return _error_response(403, "SESSION_STATE", "unknown session")
        account = state.store.get(account_id)
        auth = account.sessions.get(session)
        if auth is None or auth.status != ACCEPTED:
            return _error_response(403, "SESSION_STATE", "session is not accepted")
        if auth.consequence != resource.consequence_required:
            return _error_response(
                403,
                "SESSION_STATE",
                f"session consequence {auth.consequence!r} does not match "
                f"required {resource.consequence_required!r}",
            )
        return {
            "resource_id": resource.resource_id,
            "title": resource.title,
            "consequence": resource.consequence_required,
            "content": f"stub content for {resource.resource_id}",
        }

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "consequences": list(CONSEQUENCES)}

    return app
