"""Engine event stream consumed by the session (and by tests)."""

from __future__ import annotations

from dataclasses import dataclass, field

from noteg.errors import Frame


@dataclass(frozen=True)
class Spawn:
    entity_id: int
    kind: str


@dataclass(frozen=True)
class Despawn:
    entity_id: int


@dataclass(frozen=True)
class Quarantine:
    """entity_id is None when a probabilistic callback was dropped."""

    entity_id: int | None
    tick: int
    error: str
    trace: list[Frame] = field(default_factory=list)


@dataclass(frozen=True)
class Print:
    text: str


@dataclass(frozen=True)
class CallbackFired:
    index: int


EngineEvent = Spawn | Despawn | Quarantine | Print | CallbackFired
