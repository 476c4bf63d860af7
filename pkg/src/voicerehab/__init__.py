"""Voice-pitch driven rehabilitation suite.

Subpackages: ``pitch`` (estimation engine), ``evalharness`` (synthetic
benchmark), ``game`` (deterministic control game), ``analytics`` (session
storage and progress), ``service`` (sync server and live streaming).
"""

__version__ = "0.1.0"
