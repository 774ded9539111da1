"""Axis-separated AABB sweep against the tile grid and scene bounds.

X displacement is applied and clamped first, then Y. The velocity
component on a clamped axis is zeroed. Projectiles report wall/bounds
contact instead of resting against it (the engine despawns them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from noteg.entity import Entity
from noteg.tilemap import Tilemap

# Forgives float noise at exact tile boundaries (an AABB resting flush
# against a wall must not re-collide with it).
_EDGE_EPS = 1e-7


@dataclass(frozen=True)
class MoveResult:
    hit_x: bool
    hit_y: bool

    @property
    def hit(self) -> bool:
        return self.hit_x or self.hit_y


def _cell_span(lo: float, hi: float, tile_size: int) -> range:
    """Cell indices overlapped by the half-open interval [lo, hi)."""
    first = math.floor(lo / tile_size)
    last = math.ceil(hi / tile_size) - 1
    return range(first, max(first, last) + 1)


def _sweep_x(x: float, y: float, w: float, h: float, dx: float,
             tilemap: Tilemap | None, bound: float) -> tuple[float, bool]:
    new_x = x + dx
    hit = False
    if tilemap is not None and dx != 0.0:
        ts = tilemap.tile_size
        rows = _cell_span(y, y + h, ts)
        cols = _cell_span(min(x, new_x), max(x, new_x) + w, ts)
        for col in cols:
            blocked = any(not tilemap.walkable(col, row) for row in rows)
            if not blocked:
                continue
            if dx > 0.0 and col * ts >= x + w - _EDGE_EPS:
                new_x = min(new_x, col * ts - w)
                hit = True
            elif dx < 0.0 and (col + 1) * ts <= x + _EDGE_EPS:
                new_x = max(new_x, (col + 1) * ts)
                hit = True
    if new_x < 0.0:
        new_x, hit = 0.0, True
    if new_x + w > bound:
        new_x, hit = bound - w, True
    return new_x, hit


def move_and_collide(entity: Entity, tilemap: Tilemap | None, dt: float,
                     scene_w: float, scene_h: float) -> MoveResult:
    """Advance entity by vel*dt, clamping per axis; zero clamped velocity."""
    new_x, hit_x = _sweep_x(entity.x, entity.y, entity.w, entity.h,
                            entity.vx * dt, tilemap, scene_w)
    entity.x = new_x
    if hit_x:
        entity.vx = 0.0

    # Y uses the same sweep with axes swapped; the tilemap lookup swaps back.
    flipped = _FlippedMap(tilemap) if tilemap is not None else None
    new_y, hit_y = _sweep_x(entity.y, entity.x, entity.h, entity.w,
                            entity.vy * dt, flipped, scene_h)
    entity.y = new_y
    if hit_y:
        entity.vy = 0.0
    return MoveResult(hit_x, hit_y)


class _FlippedMap:
    """Presents the tilemap with (col,row) transposed for the Y sweep."""

    __slots__ = ("_tm", "tile_size")

    def __init__(self, tilemap: Tilemap):
        self._tm = tilemap
        self.tile_size = tilemap.tile_size

    def walkable(self, col: int, row: int) -> bool:
        return self._tm.walkable(row, col)


def line_of_sight(tilemap: Tilemap, x0: float, y0: float, x1: float, y1: float) -> bool:
    """True when the segment crosses no blocked cell (grid DDA walk)."""
    ts = tilemap.tile_size
    col, row = int(x0 // ts), int(y0 // ts)
    end_col, end_row = int(x1 // ts), int(y1 // ts)
    if not tilemap.walkable(col, row):
        return False
    dx = x1 - x0
    dy = y1 - y0
    step_col = 1 if dx > 0 else -1
    step_row = 1 if dy > 0 else -1
    # Parametric distance to the next vertical/horizontal grid line.
    t_max_x = math.inf if dx == 0 else ((col + (step_col > 0)) * ts - x0) / dx
    t_max_y = math.inf if dy == 0 else ((row + (step_row > 0)) * ts - y0) / dy
    t_delta_x = math.inf if dx == 0 else abs(ts / dx)
    t_delta_y = math.inf if dy == 0 else abs(ts / dy)
    guard = tilemap.cols + tilemap.rows + 2
    while (col, row) != (end_col, end_row) and guard > 0:
        if t_max_x < t_max_y:
            col += step_col
            t_max_x += t_delta_x
        else:
            row += step_row
            t_max_y += t_delta_y
        if not tilemap.walkable(col, row):
            return False
        guard -= 1
    return True
