"""Runtime values and the scope chain."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from noteg.assets import SpriteRef
from noteg.entity import EntityRef


class Environment:
    """Chain of scopes. The outermost scope persists across cells.

    Assignment rebinds the nearest enclosing scope that already knows
    the name, otherwise defines in the current scope; this is what lets
    a closure mutate its maker's locals.
    """

    __slots__ = ("vars", "parent")

    def __init__(self, parent: "Environment | None" = None):
        self.vars: dict[str, Any] = {}
        self.parent = parent

    def lookup(self, name: str) -> Any:
        env: Environment | None = self
        while env is not None:
            if name in env.vars:
                return env.vars[name]
            env = env.parent
        raise KeyError(name)

    def assign(self, name: str, value: Any) -> None:
        env: Environment | None = self
        while env is not None:
            if name in env.vars:
                env.vars[name] = value
                return
            env = env.parent
        self.vars[name] = value

    def define(self, name: str, value: Any) -> None:
        self.vars[name] = value


@dataclass
class Function:
    """A NoteScript closure; `env` is the defining scope chain."""

    params: tuple
    body: Any                  # nodes.Block
    env: Environment
    cell_id: str
    name: str | None = None


@dataclass
class Builtin:
    """Host function exposed to cells. `arity` of None means self-checked."""

    builtin_name: str
    fn: Callable[[list], Any]
    arity: int | None = None


def type_name(v: Any) -> str:
    if v is None:
        return "nil"
    if isinstance(v, bool):
        return "boolean"
    if isinstance(v, (int, float)):
        return "number"
    if isinstance(v, str):
        return "string"
    if isinstance(v, list):
        return "list"
    if isinstance(v, EntityRef):
        return "entity"
    if isinstance(v, SpriteRef):
        return "sprite"
    if isinstance(v, Function):
        return "function"
    if isinstance(v, Builtin):
        return "builtin"
    return type(v).__name__


def number_repr(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def value_repr(v: Any) -> str:
    """Result-style rendering: strings quoted, nil spelled out."""
    if v is None:
        return "nil"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return number_repr(float(v))
    if isinstance(v, str):
        escaped = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(v, list):
        return "[" + ", ".join(value_repr(item) for item in v) + "]"
    if isinstance(v, EntityRef):
        return f"<entity {v.id}>"
    if isinstance(v, SpriteRef):
        label = v.name or v.sheet
        return f"<sprite {label} ({v.x},{v.y},{v.w},{v.h})>"
    if isinstance(v, Function):
        return f"<fn {v.name}({', '.join(v.params)})>" if v.name else f"<fn({', '.join(v.params)})>"
    if isinstance(v, Builtin):
        return f"<builtin {v.builtin_name}>"
    return repr(v)


def display_text(v: Any) -> str:
    """print()-style rendering: strings raw, everything else like value_repr."""
    if isinstance(v, str):
        return v
    return value_repr(v)


def values_equal(a: Any, b: Any) -> bool:
    """Structural equality; mismatched types are unequal, never an error."""
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return float(a) == float(b)
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, EntityRef) and isinstance(b, EntityRef):
        return a.id == b.id
    if isinstance(a, SpriteRef) and isinstance(b, SpriteRef):
        return a == b
    return a is b
