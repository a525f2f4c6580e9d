"""Session persistence.

One document per session. The file-backed store writes through a temp file
and `os.replace`, so a reader never sees a half-written session and a crash
between turns loses at most the turn that was still in flight. The in-memory
store exists for tests.
"""

from __future__ import annotations

import json
import os
import secrets
import tempfile
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from threading import Lock
from typing import Any

from .codegen import GeneratedArtifact
from .dialogue import DialogueState


def new_session_id() -> str:
    return secrets.token_urlsafe(24)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


@dataclass(frozen=True)
class Session:
    id: str
    state: DialogueState
    created_at: str
    updated_at: str
    artifacts: tuple[GeneratedArtifact, ...] | None = None

    @classmethod
    def new(cls, state: DialogueState) -> Session:
        now = _now()
        return cls(id=new_session_id(), state=state, created_at=now, updated_at=now)

    def advanced(
        self, state: DialogueState, artifacts: tuple[GeneratedArtifact, ...] | None
    ) -> Session:
        return replace(
            self,
            state=state,
            updated_at=_now(),
            artifacts=artifacts if artifacts is not None else self.artifacts,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "createdAt": self.created_at,
            "updatedAt": self.updated_at,
            "state": self.state.to_dict(),
            "artifacts": [a.to_dict() for a in self.artifacts] if self.artifacts else None,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Session:
        artifacts = d.get("artifacts")
        return cls(
            id=d["id"],
            state=DialogueState.from_dict(d["state"]),
            created_at=d["createdAt"],
            updated_at=d["updatedAt"],
            artifacts=tuple(GeneratedArtifact.from_dict(a) for a in artifacts)
            if artifacts
            else None,
        )


class MemorySessionStore:
    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._lock = Lock()

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            return self._sessions.get(session_id)

    def put(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session


class FileSessionStore:
    """One JSON file per session under a data directory."""

    def __init__(self, data_dir: str | Path) -> None:
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)

    def _path(self, session_id: str) -> Path:
        # ids are url-safe tokens; reject anything that could escape the dir
        if not session_id.replace("-", "").replace("_", "").isalnum():
            raise ValueError(f"malformed session id {session_id!r}")
        return self.data_dir / f"{session_id}.json"

    def get(self, session_id: str) -> Session | None:
        try:
            path = self._path(session_id)
        except ValueError:
            return None
        if not path.exists():
            return None
        with path.open(encoding="utf-8") as fh:
            return Session.from_dict(json.load(fh))

    def put(self, session: Session) -> None:
        path = self._path(session.id)
        fd, tmp = tempfile.mkstemp(dir=self.data_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(session.to_dict(), fh, ensure_ascii=False)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
