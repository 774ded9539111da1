from __future__ import annotations

import pytest

from noteg.assets import SpriteRef
from noteg.scene import Scene
from noteg.tilemap import TileDef, Tilemap

FLOOR_SPRITE = SpriteRef("tiles", 0, 0, 32, 32)
WALL_SPRITE = SpriteRef("tiles", 32, 0, 32, 32)


def grid_map(rows: list[str], tile_size: int = 32) -> Tilemap:
    """Build a map from strings of '.' (floor) and '#' (wall)."""
    grid = [[0 if ch == "." else 1 for ch in row] for row in rows]
    return Tilemap(
        cols=len(rows[0]),
        rows=len(rows),
        tile_size=tile_size,
        grid=grid,
        tileset={0: TileDef(FLOOR_SPRITE, True), 1: TileDef(WALL_SPRITE, False)},
    )


def open_map(cols: int, rows: int, tile_size: int = 32) -> Tilemap:
    return grid_map(["." * cols] * rows, tile_size)


@pytest.fixture
def basic_scene() -> Scene:
    scene = Scene(800, 600, "#202020", seed=42)
    scene.tilemap = open_map(25, 19)
    return scene
