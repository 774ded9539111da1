"""Authoritative simulation state and its canonical hash.

A Scene owns the tilemap, the entities (ordered by strictly increasing
id), the tick clock, the seeded PRNG, registered probabilistic
callbacks, the quarantine log, and the current input state. All
mutation goes through the engine tick or through cell evaluation at
tick boundaries; `state_hash` is the replay-equality oracle.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Iterable

from noteg import config
from noteg.entity import DAMAGEABLE_KINDS, Entity, EntityRef, EntitySpec, KINDS
from noteg.errors import Frame, SpawnOutOfBounds, UnknownEntity
from noteg.events import Despawn, EngineEvent, Quarantine, Spawn
from noteg.rng import GameRng
from noteg.tilemap import Tilemap

LOGICAL_KEYS = ("up", "down", "left", "right", "action")


@dataclass
class InputState:
    pressed: set[str] = field(default_factory=set)

    def set_key(self, key: str, down: bool) -> None:
        if key not in LOGICAL_KEYS:
            raise ValueError(f"unknown logical key '{key}'")
        if down:
            self.pressed.add(key)
        else:
            self.pressed.discard(key)


@dataclass
class Callback:
    """A zero-arg function value fired each tick with probability p."""

    fn: Any
    p: float


@dataclass(frozen=True)
class QuarantineRecord:
    entity_id: int
    tick: int
    error: str
    trace: tuple[Frame, ...]


def fmt6(x: float) -> str:
    """Fixed 6-decimal formatting, round-half-even; -0.0 normalized."""
    return f"{float(x) + 0.0:.6f}"


def quantize(x: float) -> float:
    """The float a client sees: same 6-decimal grid the hash uses."""
    return float(fmt6(x))


def _canon_value(v: Any) -> str:
    """Injective-enough canonical text for custom field values.

    Function values collapse to their arity (deterministic across
    replays of the same notebook, which is all the hash promises).
    """
    if v is None:
        return "nil"
    if isinstance(v, bool):
        return "b:1" if v else "b:0"
    if isinstance(v, (int, float)):
        return f"n:{fmt6(v)}"
    if isinstance(v, str):
        return f"s:{len(v)}:{v}"
    if isinstance(v, list):
        return "l:[" + ",".join(_canon_value(item) for item in v) + "]"
    if isinstance(v, EntityRef):
        return f"e:{v.id}"
    if hasattr(v, "canonical"):
        return v.canonical()
    if hasattr(v, "params"):
        return f"fn:{len(v.params)}"
    if hasattr(v, "builtin_name"):
        return f"bi:{v.builtin_name}"
    raise TypeError(f"unhashable scene value: {type(v).__name__}")


class Scene:
    def __init__(self, width: float, height: float, background: str, seed: int):
        self.width = float(width)
        self.height = float(height)
        self.background = background.lower()
        self.tilemap: Tilemap | None = None
        self.entities: dict[int, Entity] = {}
        self.next_id = 1
        self.tick_count = 0
        self.rng = GameRng(seed)
        self.callbacks: list[Callback] = []
        self.quarantine_log: list[QuarantineRecord] = []
        self.input = InputState()
        # Outside the hash: pending events and per-entity brain state
        # (both rebuilt deterministically by a replay).
        self.events: list[EngineEvent] = []
        self.ai_state: dict[int, Any] = {}

    # ------------------------------------------------------------------
    # events
    # ------------------------------------------------------------------
    def emit(self, event: EngineEvent) -> None:
        self.events.append(event)

    def drain_events(self) -> list[EngineEvent]:
        drained, self.events = self.events, []
        return drained

    # ------------------------------------------------------------------
    # entities
    # ------------------------------------------------------------------
    def aabb_inside(self, x: float, y: float, w: float, h: float) -> bool:
        return x >= 0.0 and y >= 0.0 and x + w <= self.width and y + h <= self.height

    def spawn(self, spec: EntitySpec) -> int:
        if spec.kind not in KINDS:
            raise ValueError(f"unknown entity kind '{spec.kind}'")
        if not self.aabb_inside(spec.x, spec.y, spec.w, spec.h):
            raise SpawnOutOfBounds(
                f"AABB ({spec.x}, {spec.y}, {spec.w}x{spec.h}) not fully inside "
                f"{self.width:g}x{self.height:g} scene"
            )
        entity = Entity(
            id=self.next_id,
            kind=spec.kind,
            x=float(spec.x), y=float(spec.y),
            w=float(spec.w), h=float(spec.h),
            vx=float(spec.vx), vy=float(spec.vy),
            health=float(spec.health),
            speed=float(spec.speed),
            sprite=spec.sprite,
            name=spec.name,
            custom=dict(spec.custom) if spec.custom else {},
        )
        self.entities[entity.id] = entity
        self.next_id += 1
        self.emit(Spawn(entity.id, entity.kind))
        return entity.id

    def get(self, entity_id: int) -> Entity:
        entity = self.entities.get(entity_id)
        if entity is None:
            raise UnknownEntity(f"no entity with id {entity_id}")
        return entity

    def player(self) -> Entity | None:
        for entity in self.entities.values():
            if entity.kind == "player":
                return entity
        return None

    def entities_in_order(self) -> list[Entity]:
        return [self.entities[i] for i in sorted(self.entities)]

    def _remove(self, entity_id: int) -> None:
        self.entities.pop(entity_id, None)
        self.ai_state.pop(entity_id, None)

    def despawn(self, entity_id: int) -> None:
        entity = self.get(entity_id)
        entity.alive = False
        self._remove(entity_id)
        self.emit(Despawn(entity_id))

    def quarantine(self, entity_id: int, error: str, trace: Iterable[Frame]) -> QuarantineRecord:
        entity = self.get(entity_id)
        entity.alive = False
        self._remove(entity_id)
        record = QuarantineRecord(entity_id, self.tick_count, error, tuple(trace))
        self.quarantine_log.append(record)
        self.emit(Quarantine(entity_id, record.tick, error, list(record.trace)))
        return record

    # ------------------------------------------------------------------
    # canonical serialization / hash
    # ------------------------------------------------------------------
    def canonical_bytes(self) -> bytes:
        """Fixed-order textual form of everything replay must preserve.

        Entities ascend by id with fields in declaration order; floats
        use 6-decimal round-half-even; the tile grid is row-major; the
        PRNG state and tick count are included; the quarantine log is
        history, not state, and stays out.
        """
        lines: list[str] = ["scene v1"]
        lines.append(f"width {fmt6(self.width)}")
        lines.append(f"height {fmt6(self.height)}")
        lines.append(f"background {self.background}")
        lines.append(f"tick {self.tick_count}")
        lines.append(f"rng {self.rng.state}")
        pressed = ",".join(sorted(self.input.pressed))
        lines.append(f"input {pressed or '-'}")
        lines.append(f"next_id {self.next_id}")

        if self.tilemap is None:
            lines.append("tilemap none")
        else:
            tm = self.tilemap
            lines.append(f"tilemap {tm.cols} {tm.rows} {tm.tile_size}")
            for row in tm.grid:
                lines.append("row " + ",".join(str(t) for t in row))
            for tile_id in sorted(tm.tileset):
                tile = tm.tileset[tile_id]
                sprite = tile.sprite.canonical() if tile.sprite else "-"
                lines.append(f"tile {tile_id} {1 if tile.walkable else 0} {sprite}")

        lines.append(f"callbacks {len(self.callbacks)}")
        for idx, cb in enumerate(self.callbacks):
            lines.append(f"callback {idx} {fmt6(cb.p)}")

        ordered = self.entities_in_order()
        lines.append(f"entities {len(ordered)}")
        for e in ordered:
            lines.append(f"entity {e.id}")
            lines.append(f"name {_canon_value(e.name) if e.name is not None else '-'}")
            lines.append(f"kind {e.kind}")
            lines.append(f"pos {fmt6(e.x)} {fmt6(e.y)}")
            lines.append(f"size {fmt6(e.w)} {fmt6(e.h)}")
            lines.append(f"vel {fmt6(e.vx)} {fmt6(e.vy)}")
            lines.append(f"health {fmt6(e.health)}")
            lines.append(f"speed {fmt6(e.speed)}")
            lines.append(f"sprite {e.sprite.canonical() if e.sprite else '-'}")
            lines.append(f"on_update {1 if e.on_update is not None else 0}")
            lines.append(f"on_collide {1 if e.on_collide is not None else 0}")
            lines.append(f"custom {len(e.custom)}")
            for key in sorted(e.custom):
                lines.append(f"ckey {key} {_canon_value(e.custom[key])}")
            lines.append(f"alive {1 if e.alive else 0}")
        return ("\n".join(lines) + "\n").encode("utf-8")

    def state_hash(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()


def clamp_health(entity: Entity) -> None:
    """Player/enemy health floors at zero; other kinds ignore health."""
    if entity.kind in DAMAGEABLE_KINDS and entity.health < 0.0:
        entity.health = 0.0
