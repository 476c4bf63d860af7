"""Live streaming wire format: length-prefixed JSON messages.

Each message is one UTF-8 JSON object preceded by a 4-byte big-endian
length. Audio samples travel base64-encoded as little-endian float32.
Client-to-server types: START, AUDIO_CHUNK, STOP. Server-to-client:
STATE (once per processed hop), EVENT, SESSION_SAVED, WARNING, ERROR.
"""
from __future__ import annotations

import base64
import json
import struct

import numpy as np

from ..errors import ProtocolError

MAX_MESSAGE_BYTES = 8 * 1024 * 1024

CLIENT_TYPES = ("START", "AUDIO_CHUNK", "STOP")
SERVER_TYPES = ("STATE", "EVENT", "SESSION_SAVED", "WARNING", "ERROR")


def encode_message(message: dict) -> bytes:
    body = json.dumps(message, separators=(",", ":"), allow_nan=False).encode("utf-8")
    if len(body) > MAX_MESSAGE_BYTES:
        raise ProtocolError(f"message of {len(body)} bytes exceeds the frame limit")
    return struct.pack(">I", len(body)) + body


def encode_audio(samples: np.ndarray) -> str:
    return base64.b64encode(
        np.asarray(samples, dtype="<f4").tobytes()
    ).decode("ascii")


def decode_audio(payload: str) -> np.ndarray:
    try:
        raw = base64.b64decode(payload, validate=True)
    except Exception as exc:
        raise ProtocolError(f"invalid base64 audio payload: {exc}") from exc
    if len(raw) % 4 != 0:
        raise ProtocolError("audio payload is not whole float32 samples")
    return np.frombuffer(raw, dtype="<f4").astype(np.float64)


class StreamDecoder:
    """Incremental decoder: feed arbitrary byte chunks, get whole messages."""

    def __init__(self):
        self._buffer = bytearray()

    def feed(self, data: bytes) -> list[dict]:
        self._buffer.extend(data)
        messages = []
        while True:
            if len(self._buffer) < 4:
                return messages
            (length,) = struct.unpack_from(">I", self._buffer, 0)
            if length > MAX_MESSAGE_BYTES:
                raise ProtocolError(f"declared frame of {length} bytes exceeds the limit")
            if len(self._buffer) < 4 + length:
                return messages
            body = bytes(self._buffer[4 : 4 + length])
            del self._buffer[: 4 + length]
            try:
                message = json.loads(body.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise ProtocolError(f"malformed message body: {exc}") from exc
            if not isinstance(message, dict) or "type" not in message:
                raise ProtocolError("message must be a JSON object with a 'type'")
            messages.append(message)
