"""In-game objects: the Entity record and spawn requests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from noteg import config
from noteg.assets import SpriteRef

KINDS = ("player", "enemy", "trinket", "projectile")

# Kinds whose health matters: clamped at >= 0, despawn when it hits 0.
DAMAGEABLE_KINDS = ("player", "enemy")


@dataclass(frozen=True)
class EntityRef:
    """A scene-id handle; the DSL-visible face of an entity. May dangle."""

    id: int


@dataclass
class Entity:
    id: int
    kind: str
    x: float
    y: float
    w: float
    h: float
    vx: float = 0.0
    vy: float = 0.0
    health: float = config.DEFAULT_HEALTH
    speed: float = config.DEFAULT_PLAYER_SPEED
    sprite: SpriteRef | None = None
    name: str | None = None
    on_update: Any = None    # NoteScript function value, swappable live
    on_collide: Any = None
    custom: dict[str, Any] = field(default_factory=dict)
    alive: bool = True

    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def overlaps(self, other: "Entity") -> bool:
        # AABBs are half-open: [x, x+w) x [y, y+h); touching edges do not collide.
        return (self.x < other.x + other.w and other.x < self.x + self.w
                and self.y < other.y + other.h and other.y < self.y + self.h)


@dataclass
class EntitySpec:
    """What spawn() needs to mint an Entity (everything but the id)."""

    kind: str
    x: float
    y: float
    w: float = config.DEFAULT_ENTITY_SIZE
    h: float = config.DEFAULT_ENTITY_SIZE
    vx: float = 0.0
    vy: float = 0.0
    health: float = config.DEFAULT_HEALTH
    speed: float = config.DEFAULT_PLAYER_SPEED
    sprite: SpriteRef | None = None
    name: str | None = None
    custom: dict[str, Any] | None = None
