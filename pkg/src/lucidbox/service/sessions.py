"""Session workspaces: isolated temp directories tying uploads to outputs.

Each session owns temp_root/<id>/ with distinct inputs/ and outputs/
subdirectories. Sessions expire session_ttl_secs after creation; expired
sessions behave as missing even before the sweep removes their directories.
"""

from __future__ import annotations

import secrets
import shutil
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import NotFoundError, UploadTooLargeError, ValidationError

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
DEFAULT_UPLOAD_CAP = 8 * 1024 * 1024


@dataclass
class ImageRecord:
    id: str
    filename: str
    size: int


@dataclass
class Session:
    id: str
    created_at: float
    root: Path
    input_dir: Path
    output_dir: Path
    images: dict[str, ImageRecord] = field(default_factory=dict)
    artifacts: dict[str, Path] = field(default_factory=dict)
    # held for the duration of uploads and jobs; the cleanup sweep only
    # removes a session it can acquire, so it never races an in-flight job
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """Thread-safe registry of live sessions under one temp root."""

    def __init__(self, temp_root, ttl_secs: int, *,
                 max_upload_bytes: int = DEFAULT_UPLOAD_CAP, clock=time.time):
        self.temp_root = Path(temp_root)
        self.ttl_secs = ttl_secs
        self.max_upload_bytes = max_upload_bytes
        self.clock = clock
        self._sessions: dict[str, Session] = {}
        self._issued: set[str] = set()
        self._mutex = threading.Lock()
        self.temp_root.mkdir(parents=True, exist_ok=True)

    def create_session(self) -> str:
        with self._mutex:
            sid = secrets.token_hex(16)
            while sid in self._issued:  # ids never collide within a process
                sid = secrets.token_hex(16)
            self._issued.add(sid)
            root = self.temp_root / sid
            session = Session(id=sid, created_at=self.clock(), root=root,
                              input_dir=root / "inputs",
                              output_dir=root / "outputs")
            session.input_dir.mkdir(parents=True)
            session.output_dir.mkdir(parents=True)
            self._sessions[sid] = session
            return sid

    def _expired(self, session: Session, now: float | None = None) -> bool:
        now = self.clock() if now is None else now
        return session.created_at + self.ttl_secs <= now

    def get(self, session_id: str) -> Session:
        with self._mutex:
            session = self._sessions.get(session_id)
            if session is None or self._expired(session):
                raise NotFoundError(f"unknown or expired session {session_id!r}")
            return session

    def add_image(self, session_id: str, filename: str, data: bytes) -> str:
        session = self.get(session_id)
        if len(data) > self.max_upload_bytes:
            raise UploadTooLargeError(
                f"upload is {len(data)} bytes; cap is {self.max_upload_bytes}")
        if not data.startswith(PNG_SIGNATURE):
            raise ValidationError("upload is not a PNG file")
        with session.lock:
            image_id = secrets.token_hex(8)
            (session.input_dir / f"{image_id}.png").write_bytes(data)
            session.images[image_id] = ImageRecord(id=image_id, filename=filename,
                                                   size=len(data))
            return image_id

    def image_bytes(self, session: Session, image_id: str) -> bytes:
        if image_id not in session.images:
            raise NotFoundError(f"unknown image {image_id!r}")
        return (session.input_dir / f"{image_id}.png").read_bytes()

    def add_artifact(self, session: Session, artifact_id: str, data: bytes) -> Path:
        path = session.output_dir / f"{artifact_id}.png"
        path.write_bytes(data)
        session.artifacts[artifact_id] = path
        return path

    def artifact_bytes(self, session_id: str, artifact_id: str) -> bytes:
        session = self.get(session_id)
        path = session.artifacts.get(artifact_id)
        if path is None or not path.exists():
            raise NotFoundError(f"unknown artifact {artifact_id!r}")
        return path.read_bytes()

    def cleanup(self, now: float | None = None) -> int:
        """Remove sessions whose TTL elapsed; returns the purge count."""
        now = self.clock() if now is None else now
        with self._mutex:
            expired = [s for s in self._sessions.values() if self._expired(s, now)]
        purged = 0
        for session in expired:
            if not session.lock.acquire(blocking=False):
                continue  # a job is still running; next sweep gets it
            try:
                shutil.rmtree(session.root, ignore_errors=True)
                with self._mutex:
                    self._sessions.pop(session.id, None)
                purged += 1
            finally:
                session.lock.release()
        return purged

    def live_count(self) -> int:
        with self._mutex:
            return len(self._sessions)
