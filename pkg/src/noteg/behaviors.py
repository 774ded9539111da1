"""Built-in per-kind behaviors, used when an entity has no on_update.

The default enemy pursues the player with A* over the tilemap
(re-pathing every ENEMY_REPATH_INTERVAL ticks or as soon as the player
changes cell) and fires a projectile at the player's center when its
cooldown is spent, the player is inside fire_range, and there is line
of sight. All fire tunables are read from entity.custom each tick so
cells can hot-swap them live.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from noteg import config
from noteg.collision import line_of_sight
from noteg.entity import Entity, EntitySpec
from noteg.errors import InvalidCell, SpawnOutOfBounds
from noteg.pathfinding import GridPos, find_path

# custom keys the default enemy consults; spawn_enemy seeds them.
FIRE_INTERVAL_KEY = "fire_interval"
FIRE_RANGE_KEY = "fire_range"
PROJECTILE_SPEED_KEY = "projectile_speed"
PROJECTILE_DAMAGE_KEY = "projectile_damage"


@dataclass
class PursuitState:
    path: list[GridPos] | None = None
    waypoint: int = 0
    repath_in: int = 0
    player_cell: GridPos | None = None
    fire_cooldown: int = config.ENEMY_FIRE_INTERVAL
    _init: bool = dc_field(default=False, repr=False)


def _custom_number(entity: Entity, key: str, default: float) -> float:
    value = entity.custom.get(key)
    return float(value) if isinstance(value, (int, float)) and not isinstance(value, bool) else default


def builtin_update(scene, entity: Entity) -> None:
    if entity.kind == "enemy":
        _enemy_update(scene, entity)
    elif entity.kind == "projectile":
        _projectile_update(entity)
    # player velocity comes from the input step; trinkets are inert.


def _projectile_update(entity: Entity) -> None:
    # Keep direction, retarget magnitude to `speed` so live edits such
    # as `bullet.speed = 400` take effect on the next tick.
    mag = math.hypot(entity.vx, entity.vy)
    if mag > 1e-12:
        scale = max(entity.speed, 0.0) / mag
        entity.vx *= scale
        entity.vy *= scale


def _enemy_update(scene, enemy: Entity) -> None:
    state = scene.ai_state.get(enemy.id)
    if state is None:
        state = PursuitState(fire_cooldown=int(_custom_number(
            enemy, FIRE_INTERVAL_KEY, config.ENEMY_FIRE_INTERVAL)))
        scene.ai_state[enemy.id] = state

    player = scene.player()
    tilemap = scene.tilemap
    if player is None or tilemap is None:
        enemy.vx = enemy.vy = 0.0
        return

    ex, ey = enemy.center()
    px, py = player.center()
    my_cell = GridPos(*tilemap.cell_of(ex, ey))
    player_cell = GridPos(*tilemap.cell_of(px, py))

    state.repath_in -= 1
    if state.path is None or state.repath_in <= 0 or player_cell != state.player_cell:
        try:
            state.path = find_path(tilemap, my_cell, player_cell)
        except InvalidCell:
            state.path = None
        state.waypoint = 1
        state.repath_in = config.ENEMY_REPATH_INTERVAL
        state.player_cell = player_cell

    _steer(enemy, state, tilemap, px, py)
    _maybe_fire(scene, enemy, state, tilemap, ex, ey, px, py)


def _steer(enemy: Entity, state: PursuitState, tilemap, px: float, py: float) -> None:
    if not state.path:
        enemy.vx = enemy.vy = 0.0
        return
    ts = tilemap.tile_size
    cx, cy = enemy.center()
    here = GridPos(*tilemap.cell_of(cx, cy))
    while state.waypoint < len(state.path) and state.path[state.waypoint] == here:
        state.waypoint += 1
    if state.waypoint < len(state.path):
        target = state.path[state.waypoint]
        tx = (target.col + 0.5) * ts
        ty = (target.row + 0.5) * ts
    else:
        tx, ty = px, py    # same cell as the player: home in on the center
    dx, dy = tx - cx, ty - cy
    dist = math.hypot(dx, dy)
    if dist < 1e-9:
        enemy.vx = enemy.vy = 0.0
        return
    # Never overshoot the waypoint in one tick; avoids oscillation.
    v = min(enemy.speed, dist / config.TICK_DT)
    enemy.vx = dx / dist * v
    enemy.vy = dy / dist * v


def _maybe_fire(scene, enemy: Entity, state: PursuitState, tilemap,
                ex: float, ey: float, px: float, py: float) -> None:
    state.fire_cooldown -= 1
    if state.fire_cooldown > 0:
        return
    fire_range = _custom_number(enemy, FIRE_RANGE_KEY, config.ENEMY_FIRE_RANGE)
    dist = math.hypot(px - ex, py - ey)
    if dist > fire_range or dist < 1e-9:
        return
    if not line_of_sight(tilemap, ex, ey, px, py):
        return
    speed = _custom_number(enemy, PROJECTILE_SPEED_KEY, config.PROJECTILE_SPEED)
    damage = _custom_number(enemy, PROJECTILE_DAMAGE_KEY, config.PROJECTILE_DAMAGE)
    spawn_projectile(scene, enemy, px - ex, py - ey, speed=speed, damage=damage)
    state.fire_cooldown = int(_custom_number(
        enemy, FIRE_INTERVAL_KEY, config.ENEMY_FIRE_INTERVAL))


def spawn_projectile(scene, owner: Entity, dx: float, dy: float,
                     speed: float | None = None, damage: float | None = None) -> int | None:
    """Spawn a projectile at the owner's center heading along (dx, dy).

    Returns the new id, or None when the shot cannot exist (zero
    direction or the muzzle AABB does not fit inside the scene).
    """
    mag = math.hypot(dx, dy)
    if mag < 1e-12:
        return None
    speed = config.PROJECTILE_SPEED if speed is None else float(speed)
    damage = config.PROJECTILE_DAMAGE if damage is None else float(damage)
    cx, cy = owner.center()
    size = config.PROJECTILE_SIZE
    spec = EntitySpec(
        kind="projectile",
        x=cx - size / 2.0, y=cy - size / 2.0,
        w=size, h=size,
        vx=dx / mag * speed, vy=dy / mag * speed,
        health=1.0,
        speed=speed,
        custom={"owner": float(owner.id), "damage": damage},
    )
    try:
        return scene.spawn(spec)
    except SpawnOutOfBounds:
        return None
