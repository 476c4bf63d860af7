"""Exception hierarchy shared across the suite."""


class VoiceRehabError(Exception):
    """Base class for all errors raised by this package."""


class FrameError(VoiceRehabError):
    """Structurally invalid audio frame or pitch track."""


class ConfigError(VoiceRehabError):
    """Settings or configuration inconsistent with their constraints."""


class CalibrationError(VoiceRehabError):
    """Calibration impossible: not enough voiced data or degenerate range."""


class StateError(VoiceRehabError):
    """Operation applied to a game state that cannot accept it."""


class StorageConflictError(VoiceRehabError):
    """A session with the same id but different content already exists."""


class StorageCorruptError(VoiceRehabError):
    """Stored session fails its checksum or integrity re-check."""


class NotFoundError(VoiceRehabError):
    """Requested patient or session does not exist."""


class ProtocolError(VoiceRehabError):
    """Malformed or out-of-order live streaming message."""
