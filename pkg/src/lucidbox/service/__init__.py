"""HTTP service: session workspaces and the web API."""

from .app import ServiceHandle, build_app, start_service
from .sessions import SessionStore

__all__ = ["ServiceHandle", "SessionStore", "build_app", "start_service"]
