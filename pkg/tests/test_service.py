import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from conftest import make_record
from voicerehab.analytics.records import session_checksum
from voicerehab.analytics.store import SessionStore
from voicerehab.evalharness.synth import SignalSpec, render_signal
from voicerehab.game.config import Calibration, GameConfig
from voicerehab.pitch.mel import hz_to_mel
from voicerehab.pitch.types import EngineSettings
from voicerehab.service.app import create_app
from voicerehab.service.protocol import StreamDecoder, encode_audio, encode_message

SID = "aaaaaaaa-bbbb-cccc-dddd-eeeeffff0001"


def envelope(record):
    doc = record.to_dict()
    return {
        "api_version": "v1",
        "session": doc,
        "client_checksum": session_checksum(doc),
    }


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "data")
    with TestClient(app) as c:
        yield c


def test_upload_create_duplicate_conflict(client):
    rec = make_record(session_id=SID)
    env = envelope(rec)
    assert client.post("/api/v1/sessions", json=env).status_code == 201
    assert client.post("/api/v1/sessions", json=env).status_code == 200
    tampered = envelope(rec)
    tampered["session"]["metrics"]["score"] += 1
    tampered["client_checksum"] = session_checksum(tampered["session"])
    assert client.post("/api/v1/sessions", json=tampered).status_code == 409


def test_upload_checksum_mismatch_is_400(client):
    env = envelope(make_record(session_id=SID))
    env["client_checksum"] = "0" * 64
    assert client.post("/api/v1/sessions", json=env).status_code == 400


def test_upload_bad_api_version_and_shape(client):
    env = envelope(make_record(session_id=SID))
    env["api_version"] = "v2"
    assert client.post("/api/v1/sessions", json=env).status_code == 400
    assert client.post("/api/v1/sessions", json={"api_version": "v1"}).status_code == 400


def test_upload_inconsistent_metrics_rejected(client):
    env = envelope(make_record(session_id=SID))
    env["session"]["metrics"]["score"] += 3
    env["session"]["metrics"]["hit_count"] += 3
    env["client_checksum"] = session_checksum(env["session"])
    assert client.post("/api/v1/sessions", json=env).status_code == 400


def test_progress_unknown_patient_404(client):
    assert client.get("/api/v1/patients/ghost/progress").status_code == 404


def test_progress_over_three_sessions(client):
    for i in range(3):
        rec = make_record(session_id=f"00000000-0000-0000-0000-00000000000{i + 1}")
        assert client.post("/api/v1/sessions", json=envelope(rec)).status_code == 201
    res = client.get("/api/v1/patients/p01/progress")
    assert res.status_code == 200
    body = res.json()
    assert body["n_sessions"] == 3
    assert body["patient_id"] == "p01"
    assert "phonation_time_ms" in body["trends"]


def test_bearer_token_enforced(tmp_path):
    app = create_app(tmp_path / "data", token="sekrit")
    with TestClient(app) as client:
        rec = make_record(session_id=SID)
        assert client.post("/api/v1/sessions", json=envelope(rec)).status_code == 401
        ok = client.post(
            "/api/v1/sessions",
            json=envelope(rec),
            headers={"Authorization": "Bearer sekrit"},
        )
        assert ok.status_code == 201
        assert client.get("/api/v1/patients/p01/progress").status_code == 401


class WsSession:
    def __init__(self, ws):
        self.ws = ws
        self.decoder = StreamDecoder()

    def send(self, message: dict):
        self.ws.send_bytes(encode_message(message))

    def recv_until(self, *, closed_ok=False):
        out = []
        try:
            while True:
                out.extend(self.decoder.feed(self.ws.receive_bytes()))
        except Exception:
            pass
        return out


def start_message(cfg=None, cal=None, session_id=None):
    cfg = cfg or GameConfig(session_duration_s=10.0, x_spread=1.0, seed=3)
    cal = cal or Calibration(mel_low=280.0, mel_high=450.0)
    msg = {
        "type": "START",
        "patient_id": "p01",
        "config": cfg.to_dict(),
        "calibration": cal.to_dict(),
        "engine": EngineSettings().to_dict(),
        "sample_rate": 44100,
    }
    if session_id:
        msg["session_id"] = session_id
    return msg


def test_live_start_stop_without_audio(client, tmp_path):
    with client.websocket_connect("/ws/live") as ws:
        s = WsSession(ws)
        s.send(start_message(session_id=SID))
        s.send({"type": "STOP"})
        msgs = s.recv_until()
    kinds = [m["type"] for m in msgs]
    assert "SESSION_SAVED" in kinds
    store = SessionStore(client.app.state.store.root)
    rec = store.load_session("p01", SID)
    assert rec.metrics.phonation_time_ms == 0.0
    assert rec.metrics.duration_s == 0.0


def test_audio_before_start_is_protocol_error(client):
    with client.websocket_connect("/ws/live") as ws:
        s = WsSession(ws)
        s.send({"type": "AUDIO_CHUNK", "samples": encode_audio(np.zeros(100)), "t_ms": 0.0})
        msgs = s.recv_until(closed_ok=True)
    assert any(m["type"] == "ERROR" for m in msgs)


def test_invalid_start_config_is_rejected(client):
    bad_cfg = GameConfig(session_duration_s=5.0)
    with client.websocket_connect("/ws/live") as ws:
        s = WsSession(ws)
        s.send(start_message(cfg=bad_cfg))
        msgs = s.recv_until(closed_ok=True)
    errors = [m for m in msgs if m["type"] == "ERROR"]
    assert errors and "session_duration_s >= 10" in errors[0]["message"]


def test_live_tone_reports_mel_and_replays(client):
    spec = SignalSpec(waveform="sine", f0_contour=((0.0, 220.0),), duration_s=3.0, seed=9)
    samples = render_signal(spec)
    chunk = 2205  # 50 ms
    with client.websocket_connect("/ws/live") as ws:
        s = WsSession(ws)
        s.send(start_message(session_id=SID))
        for i in range(0, len(samples), chunk):
            s.send(
                {
                    "type": "AUDIO_CHUNK",
                    "samples": encode_audio(samples[i : i + chunk]),
                    "t_ms": i / 44.1,
                }
            )
        s.send({"type": "STOP"})
        msgs = s.recv_until()

    states = [m for m in msgs if m["type"] == "STATE"]
    assert states, "expected one STATE per processed hop"
    target = hz_to_mel(220.0)
    warmed = states[5:]
    voiced_mels = [m["mel"] for m in warmed if m["voiced"]]
    assert voiced_mels and all(abs(mel - target) <= 1.0 for mel in voiced_mels)

    streamed_events = [m["event"] for m in msgs if m["type"] == "EVENT"]
    store = SessionStore(client.app.state.store.root)
    rec = store.load_session("p01", SID)
    assert [e.to_dict() for e in rec.events] == streamed_events
    from voicerehab.analytics.records import verify_replay

    assert verify_replay(rec) == []


def test_late_chunks_warn_and_drop(client):
    spec = SignalSpec(waveform="sine", f0_contour=((0.0, 220.0),), duration_s=1.0, seed=9)
    samples = render_signal(spec)
    with client.websocket_connect("/ws/live") as ws:
        s = WsSession(ws)
        s.send(start_message(session_id=SID))
        s.send({"type": "AUDIO_CHUNK", "samples": encode_audio(samples), "t_ms": 0.0})
        # clock is now ~1000 ms; this chunk claims to be from t=0 again
        s.send({"type": "AUDIO_CHUNK", "samples": encode_audio(samples[:441]), "t_ms": 0.0})
        s.send({"type": "STOP"})
        msgs = s.recv_until()
    assert any(m["type"] == "WARNING" for m in msgs)
