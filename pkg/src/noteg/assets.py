"""Sprite-sheet slicing and the asset manifest.

The engine never decodes pixel data. It reads image dimensions from
the PNG header (IHDR), slices sheets into a row-major grid of cells,
and hands out SpriteRef rects; drawing is entirely the client's job.
The manifest travels inside the notebook so a shared notebook can
still replay (and render placeholders) when the image files are
missing.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

from noteg.errors import BadDimensions, IndexOutOfRange, MissingAsset, MissingDecoder

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True)
class SpriteRef:
    """A rectangle inside a named sheet. `name` is a cosmetic label."""

    sheet: str
    x: int
    y: int
    w: int
    h: int
    name: str | None = None

    def canonical(self) -> str:
        base = f"sp:{self.sheet}:{self.x},{self.y},{self.w},{self.h}"
        return f"{base}:{self.name}" if self.name else base


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    path: str
    width: int
    height: int
    tile_w: int
    tile_h: int

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "path": self.path,
            "width": self.width,
            "height": self.height,
            "tile_w": self.tile_w,
            "tile_h": self.tile_h,
        }


def png_dimensions(data: bytes) -> tuple[int, int]:
    """Width/height from a PNG header without decoding pixels.

    IHDR is required to be the first chunk, so width and height sit at
    byte offsets 16..23 as big-endian u32s.
    """
    if len(data) < 24 or not data.startswith(_PNG_SIGNATURE):
        raise MissingDecoder("not a PNG file (only PNG headers are supported)")
    width, height = struct.unpack(">II", data[16:24])
    if width == 0 or height == 0:
        raise BadDimensions("PNG declares a zero dimension")
    return width, height


@dataclass(frozen=True)
class Sheet:
    """A registered sprite sheet sliced into tile_w x tile_h cells."""

    name: str
    width: int
    height: int
    tile_w: int
    tile_h: int

    @property
    def cols(self) -> int:
        return self.width // self.tile_w

    @property
    def rows(self) -> int:
        return self.height // self.tile_h

    @property
    def cell_count(self) -> int:
        return self.cols * self.rows


def sheet_sprite(sheet: Sheet, index: int) -> SpriteRef:
    """Row-major cell `index` of the sheet as a SpriteRef."""
    if not (0 <= index < sheet.cell_count):
        raise IndexOutOfRange(
            f"sprite index {index} out of range (sheet '{sheet.name}' has {sheet.cell_count} cells)"
        )
    col = index % sheet.cols
    row = index // sheet.cols
    return SpriteRef(sheet.name, col * sheet.tile_w, row * sheet.tile_h, sheet.tile_w, sheet.tile_h)


class SheetStore:
    """Registered sheets plus the manifest entries they came from."""

    def __init__(self) -> None:
        self.sheets: dict[str, Sheet] = {}
        self.manifest: dict[str, ManifestEntry] = {}

    def register_manifest(self, entries: list[ManifestEntry]) -> None:
        for entry in entries:
            self.manifest[entry.name] = entry
            self._register(entry)

    def _register(self, entry: ManifestEntry) -> Sheet:
        if entry.tile_w <= 0 or entry.tile_h <= 0:
            raise BadDimensions(f"non-positive tile size for sheet '{entry.name}'")
        if entry.tile_w > entry.width or entry.tile_h > entry.height:
            raise BadDimensions(
                f"tile {entry.tile_w}x{entry.tile_h} exceeds image "
                f"{entry.width}x{entry.height} for sheet '{entry.name}'"
            )
        sheet = Sheet(entry.name, entry.width, entry.height, entry.tile_w, entry.tile_h)
        self.sheets[entry.name] = sheet
        return sheet

    def load_sheet(self, name: str, path: str, tile_w: int, tile_h: int,
                   base_dir: str | None = None) -> Sheet:
        """Register a sheet, reading dimensions from the file header.

        Paths are kept relative (the manifest must stay shareable).
        When the file is absent but the manifest already knows this
        sheet's dimensions, those are trusted so shared notebooks
        replay without their binaries.
        """
        if os.path.isabs(path):
            raise MissingAsset(f"asset path must be relative, got '{path}'")
        full = os.path.join(base_dir, path) if base_dir else path
        if os.path.isfile(full):
            with open(full, "rb") as fh:
                header = fh.read(64)
            width, height = png_dimensions(header)
        elif name in self.manifest:
            known = self.manifest[name]
            width, height = known.width, known.height
        else:
            raise MissingAsset(f"asset file not found: '{path}'")
        entry = ManifestEntry(name, path, width, height, tile_w, tile_h)
        sheet = self._register(entry)
        self.manifest[name] = entry
        return sheet

    def get(self, name: str) -> Sheet:
        if name not in self.sheets:
            raise MissingAsset(f"no sheet named '{name}'")
        return self.sheets[name]

    def manifest_entries(self) -> list[ManifestEntry]:
        return [self.manifest[k] for k in sorted(self.manifest)]
