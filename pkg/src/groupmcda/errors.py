"""Engine error type carrying a stable machine-readable code."""

from __future__ import annotations


class DecisionError(Exception):
    """Raised on contract violations; ``code`` is a stable identifier."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class SchemaError(DecisionError):
    """Problem-file parse failure (strict schema: unknown fields rejected)."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__("PARSE_ERROR", f"{location}: {message}" if location else message)
