"""The shareable notebook document and its canonical on-disk form.

A notebook is JSON (extension `.noteg.json`): format version, PRNG
seed, the asset manifest, and an ordered list of code/doc cells.
Canonical form is sorted keys, two-space indent, UTF-8, LF newlines,
one trailing newline; load(save(nb)) round-trips byte-identically.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from noteg.assets import ManifestEntry
from noteg.errors import SchemaError

NOTEBOOK_EXTENSION = ".noteg.json"
SUPPORTED_VERSION = 1

CELL_KINDS = ("code", "doc")


@dataclass
class Cell:
    id: str
    kind: str = "code"
    hidden: bool = False
    source: str = ""

    def as_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "hidden": self.hidden,
                "source": self.source}


@dataclass
class Notebook:
    seed: int = 0
    assets: list[ManifestEntry] = field(default_factory=list)
    cells: list[Cell] = field(default_factory=list)
    version: int = SUPPORTED_VERSION

    def cell(self, cell_id: str) -> Cell | None:
        for cell in self.cells:
            if cell.id == cell_id:
                return cell
        return None

    def code_cells(self) -> list[Cell]:
        return [c for c in self.cells if c.kind == "code"]

    def as_dict(self) -> dict:
        return {
            "version": self.version,
            "seed": self.seed,
            "assets": [entry.as_dict() for entry in self.assets],
            "cells": [cell.as_dict() for cell in self.cells],
        }


def save_notebook(notebook: Notebook) -> bytes:
    text = json.dumps(notebook.as_dict(), sort_keys=True, indent=2,
                      ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def _expect(obj: dict, key: str, kind, path: str, kind_name: str):
    if key not in obj:
        raise SchemaError(f"missing field '{key}'", path)
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise SchemaError(f"'{key}' must be {kind_name}", f"{path}.{key}" if path else key)
    if not isinstance(value, kind):
        raise SchemaError(f"'{key}' must be {kind_name}", f"{path}.{key}" if path else key)
    return value


def _no_extras(obj: dict, allowed: set[str], path: str) -> None:
    extras = set(obj) - allowed
    if extras:
        name = sorted(extras)[0]
        raise SchemaError(f"unknown field '{name}'", f"{path}.{name}" if path else name)


def load_notebook(data: bytes | str) -> Notebook:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as err:
            raise SchemaError(f"not UTF-8: {err}") from None
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as err:
        raise SchemaError(f"invalid JSON: {err.msg}") from None
    if not isinstance(raw, dict):
        raise SchemaError("notebook must be a JSON object")
    _no_extras(raw, {"version", "seed", "assets", "cells"}, "")

    version = _expect(raw, "version", int, "", "an integer")
    if version != SUPPORTED_VERSION:
        raise SchemaError("unsupported version", "version")
    seed = _expect(raw, "seed", int, "", "an integer")

    assets_raw = _expect(raw, "assets", list, "", "a list")
    entries: list[ManifestEntry] = []
    seen_names: set[str] = set()
    for i, item in enumerate(assets_raw):
        path = f"assets[{i}]"
        if not isinstance(item, dict):
            raise SchemaError("asset entry must be an object", path)
        _no_extras(item, {"name", "path", "width", "height", "tile_w", "tile_h"}, path)
        name = _expect(item, "name", str, path, "a string")
        rel = _expect(item, "path", str, path, "a string")
        if not name:
            raise SchemaError("asset name must not be empty", f"{path}.name")
        if name in seen_names:
            raise SchemaError(f"duplicate asset name {name}", f"{path}.name")
        seen_names.add(name)
        if os.path.isabs(rel) or rel.startswith("~"):
            raise SchemaError("asset paths must be relative", f"{path}.path")
        dims = []
        for key in ("width", "height", "tile_w", "tile_h"):
            value = _expect(item, key, int, path, "an integer")
            if value <= 0:
                raise SchemaError(f"'{key}' must be positive", f"{path}.{key}")
            dims.append(value)
        entries.append(ManifestEntry(name, rel, *dims))

    cells_raw = _expect(raw, "cells", list, "", "a list")
    cells: list[Cell] = []
    seen_ids: set[str] = set()
    for i, item in enumerate(cells_raw):
        path = f"cells[{i}]"
        if not isinstance(item, dict):
            raise SchemaError("cell must be an object", path)
        _no_extras(item, {"id", "kind", "hidden", "source"}, path)
        cell_id = _expect(item, "id", str, path, "a string")
        if not cell_id:
            raise SchemaError("cell id must not be empty", f"{path}.id")
        if cell_id in seen_ids:
            raise SchemaError(f"duplicate id {cell_id}", f"{path}.id")
        seen_ids.add(cell_id)
        kind = _expect(item, "kind", str, path, "a string")
        if kind not in CELL_KINDS:
            raise SchemaError(f"kind must be one of {CELL_KINDS}", f"{path}.kind")
        hidden = _expect(item, "hidden", bool, path, "a boolean")
        source = _expect(item, "source", str, path, "a string")
        cells.append(Cell(cell_id, kind, hidden, source))

    return Notebook(seed=seed, assets=entries, cells=cells, version=version)


def load_notebook_file(path: str) -> Notebook:
    with open(path, "rb") as fh:
        return load_notebook(fh.read())
