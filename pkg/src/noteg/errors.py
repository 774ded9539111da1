"""Error taxonomy shared across the engine, the DSL, and the session."""

from __future__ import annotations

from dataclasses import dataclass


class EngineError(Exception):
    """Base for engine/builtin errors surfaced to cells by name."""


class AlreadyStarted(EngineError):
    pass


class NoScene(EngineError):
    pass


class SpawnOutOfBounds(EngineError):
    pass


class UnknownEntity(EngineError):
    pass


class PlayerExists(EngineError):
    pass


class NoPlayer(EngineError):
    pass


class InvalidColor(EngineError):
    pass


class RaggedGrid(EngineError):
    pass


class UnknownTileId(EngineError):
    pass


class BadProbability(EngineError):
    pass


class ArityMismatch(EngineError):
    pass


class TypeMismatch(EngineError):
    """Builtin called with an argument of the wrong type."""


class InvalidCell(EngineError):
    """Pathfinding start/goal outside the map or on a blocked tile."""


class MissingAsset(EngineError):
    pass


class BadDimensions(EngineError):
    pass


class IndexOutOfRange(EngineError):
    pass


class MissingDecoder(EngineError):
    """Asset image format the engine cannot read dimensions from."""


@dataclass(frozen=True)
class Frame:
    """One DSL call frame: where execution was inside a function."""

    fn: str
    cell_id: str
    line: int
    col: int

    def as_dict(self) -> dict:
        return {"fn": self.fn, "cell_id": self.cell_id, "line": self.line, "col": self.col}


class ParseError(Exception):
    """NoteScript syntax error with a 1-based source position."""

    def __init__(self, message: str, line: int, col: int, token: str = ""):
        super().__init__(f"{message} at line {line}, col {col}")
        self.message = message
        self.line = line
        self.col = col
        self.token = token


class ScriptError(Exception):
    """NoteScript runtime error carrying a traceback, innermost frame first."""

    def __init__(self, message: str, trace: list[Frame]):
        super().__init__(message)
        self.message = message
        self.trace = trace


class SchemaError(Exception):
    """Notebook file rejected; `path` points at the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.message = message
        self.path = path


class ScheduleError(Exception):
    pass
