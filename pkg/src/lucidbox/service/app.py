"""HTTP+JSON API over the visualizers: uploads, jobs, artifact retrieval.

The model is loaded once at startup and never mutated afterwards; requests
run inference concurrently against the shared read-only model while
per-session mutation (uploads, job outputs) is serialized by session locks.
Every error response body is ``{"code", "message"}``; stack traces never
go over the wire.
"""

from __future__ import annotations

import secrets
import socket
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, UploadFile, File
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field
import uvicorn

from ..errors import (
    LucidboxError,
    NotFoundError,
    ServiceStartupError,
    SettingsError,
    UploadTooLargeError,
    ValidationError,
    DecodeError,
)
from ..modelio.config import AppConfig
from ..modelio.checkpoint import load_checkpoint
from ..modelio.labels import LabelTable
from ..modelio.preprocess import preprocess_image
from ..viz.registry import VisualizerRegistry
from ..viz.settings import validate_settings
from .sessions import SessionStore


class JobRequest(BaseModel):
    visualizer: str
    settings: dict = Field(default_factory=dict)
    image_ids: list[str]


def _status_for(exc: LucidboxError) -> int:
    if isinstance(exc, NotFoundError):
        return 404
    if isinstance(exc, UploadTooLargeError):
        return 413
    if isinstance(exc, (ValidationError, DecodeError)):
        return 400
    return 500


def build_app(config: AppConfig, *, ui_dir=None) -> FastAPI:
    """Load the model and assemble the API; raises model-io errors eagerly."""
    model, labels, preprocess = load_checkpoint(config.checkpoint)
    if config.labels is not None:
        labels = LabelTable.from_file(config.labels)
    if labels is None:
        labels = LabelTable.numbered(model.class_count)
    if len(labels) != model.class_count:
        raise ValidationError(f"{len(labels)} labels for {model.class_count} classes")
    registry = VisualizerRegistry(model, labels, preprocess)
    store = SessionStore(config.temp_root, config.session_ttl_secs)
    model_name = Path(config.checkpoint).stem

    app = FastAPI(title="lucidbox", docs_url=None, redoc_url=None)
    app.state.registry = registry
    app.state.store = store
    app.state.config = config

    @app.exception_handler(LucidboxError)
    async def lucidbox_error(request: Request, exc: LucidboxError):
        body = {"code": exc.code, "message": exc.message}
        if isinstance(exc, SettingsError):
            body["key"] = exc.key
        return JSONResponse(body, status_code=_status_for(exc))

    @app.exception_handler(RequestValidationError)
    async def request_error(request: Request, exc: RequestValidationError):
        return JSONResponse({"code": "validation",
                             "message": "malformed request body"}, status_code=400)

    @app.exception_handler(Exception)
    async def internal_error(request: Request, exc: Exception):
        return JSONResponse({"code": "internal", "message": "internal server error"},
                            status_code=500)

    @app.get("/api/health")
    def health():
        return {"model": model_name,
                "input_shape": list(model.input_shape),
                "class_count": model.class_count}

    @app.get("/api/visualizers")
    def visualizers():
        return [{"name": d.name, "description": d.description,
                 "settings": d.schema.to_json()}
                for d in registry.descriptors()]

    @app.post("/api/sessions")
    def create_session():
        return {"session_id": store.create_session()}

    @app.post("/api/sessions/{session_id}/images")
    async def upload_image(session_id: str, image: UploadFile = File(...)):
        data = await image.read()
        image_id = store.add_image(session_id, image.filename or "upload.png", data)
        return {"image_id": image_id}

    @app.post("/api/sessions/{session_id}/jobs")
    def run_job(session_id: str, request: JobRequest):
        session = store.get(session_id)
        # cheap validations before touching any image
        schema = registry.schema(request.visualizer)
        normalized = validate_settings(schema, request.settings)
        if not request.image_ids:
            raise ValidationError("image_ids must be a non-empty list")
        with session.lock:
            images = [(iid, store.image_bytes(session, iid))
                      for iid in request.image_ids]
            job_id = secrets.token_hex(8)
            inputs = []
            for image_id, data in images:
                x = preprocess_image(data, preprocess)
                _, results = registry.run(request.visualizer, x, normalized)
                entries = []
                for r in results:
                    artifact_id = f"{job_id}-{image_id}-c{r.class_index}"
                    store.add_artifact(session, artifact_id, r.png)
                    entries.append({"label": r.label,
                                    "probability": r.probability,
                                    "png_id": artifact_id})
                inputs.append({"image_id": image_id, "results": entries})
        return {"job_id": job_id, "visualizer": request.visualizer,
                "settings": normalized, "inputs": inputs}

    @app.get("/api/sessions/{session_id}/artifacts/{artifact_id}")
    def fetch_artifact(session_id: str, artifact_id: str):
        data = store.artifact_bytes(session_id, artifact_id)
        return Response(content=data, media_type="image/png")

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


@dataclass
class ServiceHandle:
    """A running server; stop() shuts it down and joins the threads."""

    config: AppConfig
    server: uvicorn.Server
    thread: threading.Thread
    sweeper: threading.Thread
    _stop_sweep: threading.Event

    @property
    def url(self) -> str:
        return f"http://{self.config.bind}:{self.config.port}"

    def stop(self) -> None:
        self._stop_sweep.set()
        self.server.should_exit = True
        self.thread.join(timeout=10)
        self.sweeper.join(timeout=10)

    def wait(self) -> None:
        self.thread.join()


def start_service(config: AppConfig, *, ui_dir=None,
                  sweep_interval: float | None = None) -> ServiceHandle:
    """Bind, serve in a background thread, and sweep expired sessions."""
    app = build_app(config, ui_dir=ui_dir)

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((config.bind, config.port))
    except OSError as exc:
        sock.close()
        raise ServiceStartupError(f"cannot bind {config.bind}:{config.port}: "
                                  f"{exc}") from exc

    server = uvicorn.Server(uvicorn.Config(app, log_level="warning",
                                           access_log=False))
    thread = threading.Thread(target=server.run, kwargs={"sockets": [sock]},
                              daemon=True, name="lucidbox-server")
    thread.start()

    stop_sweep = threading.Event()
    interval = sweep_interval or min(config.session_ttl_secs, 60)
    store: SessionStore = app.state.store

    def sweep():
        while not stop_sweep.wait(interval):
            store.cleanup()

    sweeper = threading.Thread(target=sweep, daemon=True, name="lucidbox-sweeper")
    sweeper.start()

    import time as _time
    deadline = _time.monotonic() + 10
    while not server.started:
        if not thread.is_alive():
            stop_sweep.set()
            raise ServiceStartupError("server thread exited during startup")
        if _time.monotonic() > deadline:
            server.should_exit = True
            stop_sweep.set()
            raise ServiceStartupError("server did not start within 10s")
        _time.sleep(0.01)
    return ServiceHandle(config=config, server=server, thread=thread,
                         sweeper=sweeper, _stop_sweep=stop_sweep)
