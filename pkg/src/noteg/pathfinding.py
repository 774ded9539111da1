"""Grid A* over the tilemap: 4-connected, unit step cost, Manhattan heuristic.

Tie-breaking is pinned so replays agree: neighbors are pushed in the
order up, right, down, left, and nodes with equal f pop FIFO (the heap
key carries a push sequence number).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from noteg.errors import InvalidCell
from noteg.tilemap import Tilemap


@dataclass(frozen=True, order=True)
class GridPos:
    col: int
    row: int


def _neighbors(pos: GridPos) -> tuple[GridPos, GridPos, GridPos, GridPos]:
    return (
        GridPos(pos.col, pos.row - 1),   # up
        GridPos(pos.col + 1, pos.row),   # right
        GridPos(pos.col, pos.row + 1),   # down
        GridPos(pos.col - 1, pos.row),   # left
    )


def manhattan(a: GridPos, b: GridPos) -> int:
    return abs(a.col - b.col) + abs(a.row - b.row)


def find_path(tilemap: Tilemap, start: GridPos, goal: GridPos,
              expanded: list[GridPos] | None = None) -> list[GridPos] | None:
    """Shortest 4-connected path from start to goal inclusive, or None.

    Raises InvalidCell when either endpoint is outside the map or on a
    blocked tile. `expanded` (when given) collects pop order, for
    instrumented heuristic checks.
    """
    for label, cell in (("start", start), ("goal", goal)):
        if not tilemap.in_bounds(cell.col, cell.row):
            raise InvalidCell(f"{label} cell ({cell.col},{cell.row}) outside the map")
        if not tilemap.walkable(cell.col, cell.row):
            raise InvalidCell(f"{label} cell ({cell.col},{cell.row}) is not walkable")

    if start == goal:
        return [start]

    counter = 0
    open_heap: list[tuple[int, int, GridPos]] = [(manhattan(start, goal), counter, start)]
    g_score: dict[GridPos, int] = {start: 0}
    came_from: dict[GridPos, GridPos] = {}
    closed: set[GridPos] = set()

    while open_heap:
        _, _, current = heapq.heappop(open_heap)
        if current in closed:
            continue
        closed.add(current)
        if expanded is not None:
            expanded.append(current)
        if current == goal:
            path = [current]
            while current in came_from:
                current = came_from[current]
                path.append(current)
            path.reverse()
            return path
        tentative = g_score[current] + 1
        for nb in _neighbors(current):
            if not tilemap.walkable(nb.col, nb.row) or nb in closed:
                continue
            if tentative < g_score.get(nb, 1 << 30):
                g_score[nb] = tentative
                came_from[nb] = current
                counter += 1
                heapq.heappush(open_heap, (tentative + manhattan(nb, goal), counter, nb))
    return None
