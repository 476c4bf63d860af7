"""HTTP/WebSocket sync service.

REST: POST /api/v1/sessions (idempotent upload), GET
/api/v1/patients/{id}/progress. Streaming: /ws/live carrying
length-prefixed JSON messages (see protocol module). Authentication is a
single static bearer token when configured; TLS is assumed to terminate
at a proxy.

Configuration comes from the environment when run via the CLI:
VOICEREHAB_DATA_DIR, VOICEREHAB_BIND (host:port), VOICEREHAB_TOKEN.
"""
from __future__ import annotations

import logging

from fastapi import Body, FastAPI, Header, HTTPException, Query, WebSocket
from fastapi.responses import JSONResponse

from ..analytics.progress import analyze_progress
from ..analytics.records import SessionRecord, session_checksum
from ..analytics.store import CREATED, SessionStore
from ..errors import (
    ConfigError,
    FrameError,
    NotFoundError,
    ProtocolError,
    StorageConflictError,
    VoiceRehabError,
)
from ..game.config import Calibration, GameConfig
from ..pitch.types import EngineSettings
from .live import LiveSessionRunner
from .protocol import StreamDecoder, decode_audio, encode_message

log = logging.getLogger(__name__)

API_VERSION = "v1"


def create_app(data_dir, token: str | None = None) -> FastAPI:
    app = FastAPI(title="voicerehab sync service")
    store = SessionStore(data_dir)
    app.state.store = store
    app.state.token = token

    def check_token(authorization: str | None) -> None:
        if token is None:
            return
        if authorization != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

    @app.post("/api/v1/sessions")
    def upload_session(
        payload: dict = Body(...), authorization: str | None = Header(default=None)
    ):
        check_token(authorization)
        if payload.get("api_version") != API_VERSION:
            raise HTTPException(
                status_code=400, detail=f"api_version must be {API_VERSION!r}"
            )
        session_doc = payload.get("session")
        if not isinstance(session_doc, dict):
            raise HTTPException(status_code=400, detail="missing session document")
        claimed = payload.get("client_checksum")
        actual = session_checksum(session_doc)
        if claimed != actual:
            raise HTTPException(status_code=400, detail="client_checksum mismatch")
        patient_id = session_doc.get("patient_id")
        session_id = session_doc.get("session_id")
        if not isinstance(patient_id, str) or not isinstance(session_id, str):
            raise HTTPException(status_code=400, detail="missing patient or session id")
        # idempotency on (patient, session, checksum) is decided before any
        # deeper validation: a resend acks, a same-id rewrite conflicts
        try:
            existing = store.stored_checksum(patient_id, session_id)
        except VoiceRehabError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        if existing is not None:
            if existing == actual:
                return JSONResponse(
                    status_code=200, content={"status": "duplicate", "session_id": session_id}
                )
            raise HTTPException(
                status_code=409,
                detail=f"session {session_id} already stored with different content",
            )
        try:
            record = SessionRecord.from_dict(session_doc)
            record.verify_metrics()
        except VoiceRehabError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        try:
            status = store.save_session(record)
        except StorageConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        code = 201 if status == CREATED else 200
        return JSONResponse(
            status_code=code, content={"status": status, "session_id": record.session_id}
        )

    @app.get("/api/v1/patients/{patient_id}/progress")
    def patient_progress(
        patient_id: str, authorization: str | None = Header(default=None)
    ):
        check_token(authorization)
        try:
            if not store.has_patient(patient_id):
                raise NotFoundError(f"unknown patient {patient_id}")
            sessions = store.load_patient_sessions(patient_id)
            if not sessions:
                raise NotFoundError(f"no sessions for patient {patient_id}")
            report = analyze_progress(sessions)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except FrameError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return report.to_dict()

    @app.websocket("/ws/live")
    async def live_session(websocket: WebSocket, token_param: str | None = Query(default=None, alias="token")):
        if token is not None:
            header = websocket.headers.get("authorization")
            if token_param != token and header != f"Bearer {token}":
                await websocket.close(code=4401)
                return
        await websocket.accept()
        decoder = StreamDecoder()
        runner: LiveSessionRunner | None = None

        async def send(message: dict) -> None:
            await websocket.send_bytes(encode_message(message))

        async def fail(reason: str) -> None:
            log.warning("live session protocol error: %s", reason)
            await send({"type": "ERROR", "message": reason})
            await websocket.close(code=4400)

        try:
            while True:
                data = await websocket.receive_bytes()
                for message in decoder.feed(data):
                    kind = message.get("type")
                    if kind == "START":
                        if runner is not None:
                            return await fail("duplicate START")
                        runner = LiveSessionRunner(
                            store=store,
                            patient_id=message["patient_id"],
                            config=GameConfig.from_dict(message["config"]),
                            calibration=Calibration.from_dict(message["calibration"]),
                            engine_settings=EngineSettings.from_dict(message["engine"]),
                            sample_rate=int(message["sample_rate"]),
                            frame_size=int(message.get("frame_size", 2048)),
                            hop=int(message.get("hop", 512)),
                            session_id=message.get("session_id"),
                        )
                    elif kind == "AUDIO_CHUNK":
                        if runner is None:
                            return await fail("AUDIO_CHUNK before START")
                        samples = decode_audio(message["samples"])
                        for out in runner.feed_audio(samples, float(message["t_ms"])):
                            await send(out)
                    elif kind == "STOP":
                        if runner is None:
                            return await fail("STOP before START")
                        for out in runner.stop():
                            await send(out)
                        await websocket.close()
                        return
                    else:
                        return await fail(f"unknown message type {kind!r}")
        except (ProtocolError, ConfigError, FrameError, KeyError, ValueError, TypeError) as exc:
            await fail(f"{type(exc).__name__}: {exc}")
        except Exception:  # noqa: BLE001 - disconnects surface here
            log.info("live session closed", exc_info=True)

    return app
