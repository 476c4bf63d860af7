"""Append-only session storage: one JSON document per session plus a
per-patient index, no database.

Layout under the data directory:

    patients/<patient_id>/sessions/<session_id>.json
    patients/<patient_id>/index.json
    patients/<patient_id>/.lock

Reads are freely concurrent; writes take the per-patient lock file.
Re-saving identical content is a no-op, differing content a conflict.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

from filelock import FileLock

from ..errors import NotFoundError, StorageConflictError, StorageCorruptError
from .records import (
    SessionRecord,
    session_checksum,
    validate_patient_id,
    validate_session_id,
)

CREATED = "created"
DUPLICATE = "duplicate"


class SessionStore:
    def __init__(self, data_dir):
        self.root = Path(data_dir)
        (self.root / "patients").mkdir(parents=True, exist_ok=True)

    def _patient_dir(self, patient_id: str) -> Path:
        return self.root / "patients" / validate_patient_id(patient_id)

    def _session_path(self, patient_id: str, session_id: str) -> Path:
        return self._patient_dir(patient_id) / "sessions" / f"{validate_session_id(session_id)}.json"

    def save_session(self, record: SessionRecord) -> str:
        """Persist a record durably; returns CREATED or DUPLICATE."""
        doc = record.to_dict()
        checksum = session_checksum(doc)
        doc["checksum"] = checksum
        pdir = self._patient_dir(record.patient_id)
        pdir.mkdir(parents=True, exist_ok=True)
        (pdir / "sessions").mkdir(exist_ok=True)
        with FileLock(str(pdir / ".lock")):
            path = self._session_path(record.patient_id, record.session_id)
            if path.exists():
                existing = json.loads(path.read_text(encoding="utf-8"))
                if existing.get("checksum") == checksum:
                    return DUPLICATE
                raise StorageConflictError(
                    f"session {record.session_id} already stored with different content"
                )
            tmp = path.with_suffix(".json.tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=2, sort_keys=True)
                fh.write("\n")
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
            self._index_add(pdir, record, checksum)
        return CREATED

    def _index_add(self, pdir: Path, record: SessionRecord, checksum: str) -> None:
        index = self._read_index(pdir)
        entries = [e for e in index["sessions"] if e["session_id"] != record.session_id]
        entries.append(
            {
                "session_id": record.session_id,
                "started_at": record.to_dict()["started_at"],
                "checksum": checksum,
            }
        )
        entries.sort(key=lambda e: (e["started_at"], e["session_id"]))
        tmp = pdir / "index.json.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump({"sessions": entries}, fh, indent=2, sort_keys=True)
            fh.write("\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, pdir / "index.json")

    @staticmethod
    def _read_index(pdir: Path) -> dict:
        index_path = pdir / "index.json"
        if index_path.exists():
            return json.loads(index_path.read_text(encoding="utf-8"))
        return {"sessions": []}

    def stored_checksum(self, patient_id: str, session_id: str) -> str | None:
        """Checksum of an already-stored session, or None if absent."""
        path = self._session_path(patient_id, session_id)
        if not path.exists():
            return None
        doc = json.loads(path.read_text(encoding="utf-8"))
        return doc.get("checksum")

    def load_session(self, patient_id: str, session_id: str) -> SessionRecord:
        """Load with checksum and metric-integrity verification."""
        path = self._session_path(patient_id, session_id)
        if not path.exists():
            raise NotFoundError(f"no session {session_id} for patient {patient_id}")
        doc = json.loads(path.read_text(encoding="utf-8"))
        stored = doc.pop("checksum", None)
        if stored != session_checksum(doc):
            raise StorageCorruptError(f"checksum mismatch in {path}")
        record = SessionRecord.from_dict(doc)
        record.verify_metrics()
        return record

    def list_sessions(self, patient_id: str) -> list[str]:
        """Session ids ordered by start time."""
        pdir = self._patient_dir(patient_id)
        if not pdir.exists():
            raise NotFoundError(f"unknown patient {patient_id}")
        return [e["session_id"] for e in self._read_index(pdir)["sessions"]]

    def load_patient_sessions(self, patient_id: str) -> list[SessionRecord]:
        return [self.load_session(patient_id, sid) for sid in self.list_sessions(patient_id)]

    def patients(self) -> list[str]:
        base = self.root / "patients"
        return sorted(p.name for p in base.iterdir() if p.is_dir())

    def has_patient(self, patient_id: str) -> bool:
        return self._patient_dir(patient_id).exists()
