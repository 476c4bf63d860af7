from .app import create_app
from .live import LiveSessionRunner
from .protocol import StreamDecoder, decode_audio, encode_audio, encode_message

__all__ = [
    "LiveSessionRunner",
    "StreamDecoder",
    "create_app",
    "decode_audio",
    "encode_audio",
    "encode_message",
]
