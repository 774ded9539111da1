"""Tile grid with per-id walkability."""

from __future__ import annotations

from dataclasses import dataclass, field

from noteg.assets import SpriteRef
from noteg.errors import RaggedGrid, UnknownTileId


@dataclass(frozen=True)
class TileDef:
    sprite: SpriteRef | None
    walkable: bool


@dataclass
class Tilemap:
    cols: int
    rows: int
    tile_size: int
    grid: list[list[int]]
    tileset: dict[int, TileDef] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.grid) != self.rows:
            raise RaggedGrid(f"grid has {len(self.grid)} rows, expected {self.rows}")
        for r, row in enumerate(self.grid):
            if len(row) != self.cols:
                raise RaggedGrid(f"row {r} has {len(row)} cells, expected {self.cols}")
        for row in self.grid:
            for tile_id in row:
                if tile_id not in self.tileset:
                    raise UnknownTileId(f"tile id {tile_id} has no tileset entry")

    def in_bounds(self, col: int, row: int) -> bool:
        return 0 <= col < self.cols and 0 <= row < self.rows

    def walkable(self, col: int, row: int) -> bool:
        """Cells outside the grid count as blocked."""
        if not self.in_bounds(col, row):
            return False
        return self.tileset[self.grid[row][col]].walkable

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        """(col, row) containing the point; no bounds check."""
        return int(x // self.tile_size), int(y // self.tile_size)
