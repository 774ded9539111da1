#!/usr/bin/env python3
"""Regenerate the example notebooks and their sprite-sheet asset.

Run from the repo root:  python3 scripts/generate_fixtures.py
"""

from __future__ import annotations

import os
import struct
import sys
import zlib

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from noteg.assets import ManifestEntry
from noteg.notebook import Cell, Notebook, save_notebook

ROOT = os.path.join(os.path.dirname(__file__), "..", "notebooks")

# 8 tiles of 32x32 in a 128x64 sheet: floor, hero, wall, skeleton,
# chest, coin, slime, bolt.
TILE_COLORS = [
    (86, 125, 70), (219, 181, 135), (96, 96, 104), (226, 226, 226),
    (151, 105, 66), (240, 200, 70), (120, 190, 90), (235, 240, 250),
]


def make_sheet_png(path: str, tile: int = 32, cols: int = 4, rows: int = 2) -> None:
    width, height = cols * tile, rows * tile

    def chunk(tag: bytes, payload: bytes) -> bytes:
        return (struct.pack(">I", len(payload)) + tag + payload
                + struct.pack(">I", zlib.crc32(tag + payload)))

    raw = bytearray()
    for y in range(height):
        raw.append(0)   # filter: none
        for x in range(width):
            index = (y // tile) * cols + (x // tile)
            r, g, b = TILE_COLORS[index]
            # checker shading so tiles read as sprites, not flat swatches
            if (x // 4 + y // 4) % 2 == 0:
                r, g, b = max(r - 20, 0), max(g - 20, 0), max(b - 20, 0)
            lx, ly = x % tile, y % tile
            if lx in (0, tile - 1) or ly in (0, tile - 1):
                r, g, b = r // 2, g // 2, b // 2
            raw += bytes((r, g, b))
    ihdr = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    data = (b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr)
            + chunk(b"IDAT", zlib.compress(bytes(raw), 9)) + chunk(b"IEND", b""))
    with open(path, "wb") as fh:
        fh.write(data)


SHEET_ENTRY = ManifestEntry("sheet", "assets/sheet.png", 128, 64, 32, 32)

SETUP_SOURCE = """\
load_sheet("sheet", "assets/sheet.png", 32, 32)
floor = sheet_sprite("sheet", 0)
hero_sprite = sheet_sprite("sheet", 1)
wall = sheet_sprite("sheet", 2)
skeleton = sheet_sprite("sheet", 3)
start_game(800, 600, "#202020")
"""

DUNGEON_MAP_SOURCE = """\
# 25x19 dungeon: solid border, two pillar blocks in the middle
rows = []
for r in range(19) {
  row = []
  for c in range(25) {
    v = 0
    if r == 0 or r == 18 or c == 0 or c == 24 { v = 1 }
    row = row + [v]
  }
  rows = rows + [row]
}
for c in range(6) {
  rows[6][c + 6] = 1
  rows[12][c + 13] = 1
}
create_map(rows, floor, wall)
"""


def tour_notebook() -> Notebook:
    cells = [
        Cell("c0", "doc", False,
             "A quick tour: every game call in the base command-set, "
             "ending with a scene reset."),
        Cell("c1", "code", False, SETUP_SOURCE),
        Cell("c2", "code", False, "create_map(floor)\n"),
        Cell("c3", "code", False,
             'create_player("hero", hero_sprite, 96, 96)\nhero.score = 0\n'),
        Cell("c4", "code", False, """\
coin = add_trinket(16, 16, "#f0c846", 200, 104)
coin.on_collide = fn(self, other) {
  if other.kind == "player" {
    other.score = other.score + 1
    despawn(self)
  }
}
"""),
        Cell("c5", "code", False, 'snake = spawn_enemy(skeleton, 600, 420)\n'),
        Cell("c6", "code", False, """\
ambushes = 0
callback_prob(fn() { ambushes = ambushes + 1 }, 0.25)
"""),
        Cell("c7", "code", False, """\
# helper soup lives here; fold it away before sharing
roster = scene_list()
print("objects in scene:")
print(len(roster))
hide()
"""),
        Cell("c8", "code", False, "refresh_scene()\n"),
    ]
    return Notebook(seed=42, assets=[SHEET_ENTRY], cells=cells)


def determinism_notebook() -> Notebook:
    cells = [
        Cell("c0", "doc", False,
             "Replay fixture: dungeon, one player, two skeletons, and a "
             "coin-flip callback. Same seed, same hash, every time."),
        Cell("c1", "code", False, SETUP_SOURCE),
        Cell("c2", "code", False, DUNGEON_MAP_SOURCE),
        Cell("c3", "code", False, 'create_player("hero", hero_sprite, 100, 100)\n'),
        Cell("c4", "code", False, """\
e1 = spawn_enemy(skeleton, 600, 330)
e2 = spawn_enemy(skeleton, 200, 500)
"""),
        Cell("c5", "code", False, """\
flips = 0
callback_prob(fn() { flips = flips + 1 }, 0.5)
"""),
    ]
    return Notebook(seed=42, assets=[SHEET_ENTRY], cells=cells)


def quarantine_notebook() -> Notebook:
    # enemies start far enough away that nothing fires inside 120 ticks,
    # so the no-fault control run matches the survivors exactly
    cells = [
        Cell("c0", "doc", False,
             "Quarantine fixture: three skeletons, one gets a broken "
             "on_update hot-swapped onto it."),
        Cell("c1", "code", False, SETUP_SOURCE),
        Cell("c2", "code", False, "create_map(floor)\n"),
        Cell("c3", "code", False, 'create_player("hero", hero_sprite, 48, 48)\n'),
        Cell("c4", "code", False, """\
e1 = spawn_enemy(skeleton, 700, 500)
e2 = spawn_enemy(skeleton, 740, 420)
e3 = spawn_enemy(skeleton, 660, 540)
"""),
        Cell("c5", "code", False,
             "e2.on_update = fn(self, dt) { self.broken_thing }\n"),
    ]
    return Notebook(seed=7, assets=[SHEET_ENTRY], cells=cells)


def main() -> None:
    os.makedirs(os.path.join(ROOT, "assets"), exist_ok=True)
    make_sheet_png(os.path.join(ROOT, "assets", "sheet.png"))
    for name, nb in (("tour", tour_notebook()),
                     ("determinism", determinism_notebook()),
                     ("quarantine", quarantine_notebook())):
        path = os.path.join(ROOT, f"{name}.noteg.json")
        with open(path, "wb") as fh:
            fh.write(save_notebook(nb))
        print("wrote", path)


if __name__ == "__main__":
    main()
