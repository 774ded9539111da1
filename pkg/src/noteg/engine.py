"""The fixed-timestep tick: one deterministic pass over the scene.

Order within a tick is part of the replay contract:
  1. player velocity from the input state (diagonals normalized),
  2. behaviors in ascending id (on_update slot, else kind default),
  3. axis-separated movement and tile/bounds collision,
  4. entity-pair overlap dispatch in ascending (idA, idB),
  5. probabilistic callbacks in registration order (one PRNG draw each),
  6. removal of dead/despawned entities,
  7. tick_count += 1.

A DSL error inside a behavior quarantines the owning entity; a DSL
error inside a callback drops the callback. The tick always completes.
"""

from __future__ import annotations

import math
from typing import Any, Callable

from noteg import behaviors, config
from noteg.collision import move_and_collide
from noteg.entity import DAMAGEABLE_KINDS, Entity, EntityRef
from noteg.errors import ScriptError
from noteg.events import CallbackFired, Despawn, EngineEvent, Quarantine
from noteg.scene import Scene, clamp_health

Invoke = Callable[[Any, list], Any]

_DIAG = 1.0 / math.sqrt(2.0)


def _require_invoke(invoke: Invoke | None) -> Invoke:
    if invoke is None:
        raise ValueError("scene has script behaviors/callbacks but no evaluator was attached")
    return invoke


def tick(scene: Scene, invoke: Invoke | None = None) -> list[EngineEvent]:
    """Advance the scene by exactly one 1/60 s step; returns the events."""
    dt = config.TICK_DT

    _apply_input(scene)

    for eid in sorted(scene.entities):
        entity = scene.entities.get(eid)
        if entity is None or not entity.alive:
            continue
        if entity.on_update is not None:
            try:
                _require_invoke(invoke)(entity.on_update, [EntityRef(eid), dt])
            except ScriptError as err:
                scene.quarantine(eid, err.message, err.trace)
        else:
            behaviors.builtin_update(scene, entity)

    for eid in sorted(scene.entities):
        entity = scene.entities.get(eid)
        if entity is None or not entity.alive:
            continue
        result = move_and_collide(entity, scene.tilemap, dt, scene.width, scene.height)
        if entity.kind == "projectile" and result.hit:
            entity.alive = False

    _collide_pairs(scene, invoke)
    _run_callbacks(scene, invoke)
    _sweep_dead(scene)

    scene.tick_count += 1
    return scene.drain_events()


def _apply_input(scene: Scene) -> None:
    pressed = scene.input.pressed
    dir_x = ("right" in pressed) - ("left" in pressed)
    dir_y = ("down" in pressed) - ("up" in pressed)
    norm = _DIAG if dir_x and dir_y else 1.0
    for entity in scene.entities.values():
        if entity.kind == "player" and entity.alive:
            entity.vx = dir_x * entity.speed * norm
            entity.vy = dir_y * entity.speed * norm


def _projectile_owner(entity: Entity) -> int | None:
    owner = entity.custom.get("owner")
    if isinstance(owner, (int, float)) and not isinstance(owner, bool):
        return int(owner)
    return None


def _dispatch_contact(scene: Scene, actor: Entity, other: Entity, invoke: Invoke | None) -> None:
    if actor.on_collide is not None:
        try:
            _require_invoke(invoke)(actor.on_collide, [EntityRef(actor.id), EntityRef(other.id)])
        except ScriptError as err:
            scene.quarantine(actor.id, err.message, err.trace)
        return
    if (actor.kind == "projectile" and other.kind in DAMAGEABLE_KINDS
            and other.id != _projectile_owner(actor)):
        other.health -= actor.custom.get("damage", config.PROJECTILE_DAMAGE)
        clamp_health(other)
        actor.alive = False


def _collide_pairs(scene: Scene, invoke: Invoke | None) -> None:
    ids = sorted(scene.entities)
    for i, id_a in enumerate(ids):
        for id_b in ids[i + 1:]:
            a = scene.entities.get(id_a)
            b = scene.entities.get(id_b)
            if a is None or b is None or not (a.alive and b.alive):
                continue
            if not a.overlaps(b):
                continue
            _dispatch_contact(scene, a, b, invoke)
            a = scene.entities.get(id_a)
            b = scene.entities.get(id_b)
            if a is not None and b is not None and a.alive and b.alive:
                _dispatch_contact(scene, b, a, invoke)


def _run_callbacks(scene: Scene, invoke: Invoke | None) -> None:
    # Exactly one PRNG draw per registered callback per tick, fired or not.
    kept = []
    for index, cb in enumerate(scene.callbacks):
        draw = scene.rng.uniform()
        keep = True
        if draw < cb.p:
            try:
                _require_invoke(invoke)(cb.fn, [])
                scene.emit(CallbackFired(index))
            except ScriptError as err:
                scene.emit(Quarantine(None, scene.tick_count, err.message, err.trace))
                keep = False
        if keep:
            kept.append(cb)
    scene.callbacks = kept


def _sweep_dead(scene: Scene) -> None:
    for eid in sorted(scene.entities):
        entity = scene.entities[eid]
        dead = not entity.alive or (entity.kind in DAMAGEABLE_KINDS and entity.health <= 0.0)
        if dead:
            scene._remove(eid)
            scene.emit(Despawn(eid))
