"""Notebook session: cell execution, wire protocol, deterministic replay.

All protocol commands funnel through handle_message, which the caller
(the server loop, or a replay) invokes only at tick boundaries; that
single rule makes the event stream and final hash a pure function of
(notebook, schedule, ticks).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from noteg import engine
from noteg.assets import SpriteRef
from noteg.builtins import install_builtins, refresh_scene_state
from noteg.errors import ParseError, ScheduleError
from noteg.events import EngineEvent, Print, Quarantine
from noteg.host import GameHost
from noteg.notebook import Cell, Notebook, save_notebook
from noteg.rng import GameRng
from noteg.scene import LOGICAL_KEYS, quantize
from noteg.script.interpreter import NO_VALUE, Interpreter
from noteg.script.parser import parse
from noteg.script.values import Environment, value_repr

_CONTROL_ACTIONS = ("start", "pause", "step", "refresh", "set_seed")


@dataclass(frozen=True)
class ScheduleAction:
    tick: int
    action: str                  # execute | input | control
    cell_id: str | None = None
    key: str | None = None
    state: str | None = None
    control: str | None = None
    seed: int | None = None


def load_schedule(data: bytes | str | dict | list) -> list[ScheduleAction]:
    """Parse and validate a replay schedule (ticks must be non-decreasing)."""
    if isinstance(data, (bytes, str)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as err:
            raise ScheduleError(f"invalid schedule JSON: {err.msg}") from None
    if isinstance(data, dict):
        data = data.get("actions", None)
    if not isinstance(data, list):
        raise ScheduleError("schedule must be a list of actions (or {'actions': [...]})")
    actions: list[ScheduleAction] = []
    last_tick = 0
    for i, raw in enumerate(data):
        where = f"actions[{i}]"
        if not isinstance(raw, dict):
            raise ScheduleError(f"{where}: action must be an object")
        tick = raw.get("tick")
        if not isinstance(tick, int) or isinstance(tick, bool) or tick < 0:
            raise ScheduleError(f"{where}: 'tick' must be a non-negative integer")
        if tick < last_tick:
            raise ScheduleError(f"{where}: ticks must be non-decreasing")
        last_tick = tick
        kind = raw.get("action")
        if kind == "execute":
            cell_id = raw.get("cell_id")
            if not isinstance(cell_id, str) or not cell_id:
                raise ScheduleError(f"{where}: execute needs a 'cell_id'")
            actions.append(ScheduleAction(tick, "execute", cell_id=cell_id))
        elif kind == "input":
            key = raw.get("key")
            state = raw.get("state")
            if key not in LOGICAL_KEYS:
                raise ScheduleError(f"{where}: unknown key {key!r}")
            if state not in ("down", "up"):
                raise ScheduleError(f"{where}: state must be 'down' or 'up'")
            actions.append(ScheduleAction(tick, "input", key=key, state=state))
        elif kind == "control":
            control = raw.get("control")
            if control not in ("start", "pause", "step", "refresh"):
                raise ScheduleError(f"{where}: unknown control {control!r}")
            actions.append(ScheduleAction(tick, "control", control=control))
        else:
            raise ScheduleError(f"{where}: unknown action {kind!r}")
    return actions


def _sprite_dict(sprite: SpriteRef | None) -> dict | None:
    if sprite is None:
        return None
    return {"sheet": sprite.sheet, "x": sprite.x, "y": sprite.y,
            "w": sprite.w, "h": sprite.h, "name": sprite.name}


class Session(GameHost):
    """One live notebook attached to (at most) one scene."""

    def __init__(self, notebook: Notebook, base_dir: str | None = None):
        super().__init__(seed=notebook.seed, base_dir=base_dir)
        self.notebook = notebook
        self.env = Environment()
        self.interp = Interpreter(self, self.env)
        install_builtins(self.env, self, self.interp)
        self.assets.register_manifest(notebook.assets)
        self.hidden_cells = {c.id for c in notebook.cells if c.hidden}
        self._map_dirty = False

    # ------------------------------------------------------------------
    # host hooks
    # ------------------------------------------------------------------
    def map_installed(self) -> None:
        self._map_dirty = True

    # ------------------------------------------------------------------
    # cells
    # ------------------------------------------------------------------
    def execute_cell(self, cell_id: str, source: str | None = None) -> list[dict]:
        """Run one cell at the current boundary; returns protocol messages."""
        cell = self.notebook.cell(cell_id)
        if cell is None:
            if source is None:
                return [self._error_result(cell_id, f"unknown cell '{cell_id}'")]
            cell = Cell(cell_id, "code", False, source)
            self.notebook.cells.append(cell)
        elif cell.kind == "doc":
            return [self._error_result(cell_id, f"cell '{cell_id}' is a doc cell")]
        elif source is not None:
            cell.source = source

        try:
            program = parse(cell.source, cell.id)
        except ParseError as err:
            frame = {"fn": "<cell>", "cell_id": cell.id, "line": err.line, "col": err.col}
            return [{"type": "result", "cell_id": cell.id, "ok": False,
                     "error": {"message": f"parse error: {err.message}",
                               "trace": [frame]}}]

        result = self.interp.eval_cell(program)
        messages = self._event_messages()
        if result.ok:
            reply = {"type": "result", "cell_id": cell.id, "ok": True}
            if result.value is not NO_VALUE and result.value is not None:
                reply["value_repr"] = value_repr(result.value)
        else:
            reply = {"type": "result", "cell_id": cell.id, "ok": False,
                     "error": {"message": result.error.message,
                               "trace": [f.as_dict() for f in result.error.trace]}}
        messages.append(reply)
        return messages

    def run_all_cells(self) -> list[dict]:
        """Top-to-bottom pass over the notebook's code cells (tick 0 setup)."""
        messages: list[dict] = []
        for cell in self.notebook.code_cells():
            messages.extend(self.execute_cell(cell.id))
        return messages

    @staticmethod
    def _error_result(cell_id: str, message: str) -> dict:
        return {"type": "result", "cell_id": cell_id, "ok": False,
                "error": {"message": message, "trace": []}}

    # ------------------------------------------------------------------
    # protocol
    # ------------------------------------------------------------------
    def handle_frame(self, text: str) -> list[dict]:
        """One raw wire frame in; the connection must survive anything."""
        try:
            msg = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError):
            return [self._protocol_error("frame is not valid JSON")]
        if not isinstance(msg, dict):
            return [self._protocol_error("frame must be a JSON object")]
        return self.handle_message(msg)

    def handle_message(self, msg: dict) -> list[dict]:
        msg_type = msg.get("type")
        if msg_type == "execute":
            cell_id = msg.get("cell_id")
            source = msg.get("source")
            if not isinstance(cell_id, str) or not cell_id:
                return [self._protocol_error("execute needs a string 'cell_id'")]
            if source is not None and not isinstance(source, str):
                return [self._protocol_error("'source' must be a string")]
            return self.execute_cell(cell_id, source)
        if msg_type == "input":
            key = msg.get("key")
            state = msg.get("state")
            if key not in LOGICAL_KEYS or state not in ("down", "up"):
                return [self._protocol_error(f"bad input frame: {msg!r}")]
            if self.scene is not None:
                self.scene.input.set_key(key, state == "down")
            return []
        if msg_type == "control":
            return self._handle_control(msg)
        return [self._protocol_error(f"unknown message type {msg_type!r}")]

    def _handle_control(self, msg: dict) -> list[dict]:
        action = msg.get("action")
        if action not in _CONTROL_ACTIONS:
            return [self._protocol_error(f"unknown control action {action!r}")]
        if action == "start":
            self.running = True
            return []
        if action == "pause":
            self.running = False
            return []
        if action == "step":
            if self.scene is None:
                return [self._protocol_error("no scene to step")]
            messages = self.tick_once()
            messages.append(self.snapshot_message())
            return messages
        if action == "refresh":
            if self.scene is None:
                return [self._protocol_error("no scene to refresh")]
            refresh_scene_state(self.scene)
            return [self.snapshot_message()]
        seed = msg.get("seed")
        if not isinstance(seed, int) or isinstance(seed, bool):
            return [self._protocol_error("set_seed needs an integer 'seed'")]
        self.seed = seed
        if self.scene is not None:
            self.scene.rng = GameRng(seed)
        return []

    @staticmethod
    def _protocol_error(message: str) -> dict:
        return {"type": "print", "text": f"[protocol] {message}"}

    # ------------------------------------------------------------------
    # simulation
    # ------------------------------------------------------------------
    def tick_once(self) -> list[dict]:
        events = engine.tick(self.scene, self.interp.call_function)
        return self._messages_from(events)

    def _event_messages(self) -> list[dict]:
        messages = self._messages_from(self.drain_events())
        if self._map_dirty:
            self._map_dirty = False
            messages.insert(0, self.map_message())
        return messages

    def _messages_from(self, events: list[EngineEvent]) -> list[dict]:
        messages = []
        for event in events:
            if isinstance(event, Print):
                messages.append({"type": "print", "text": event.text})
            elif isinstance(event, Quarantine):
                messages.append({
                    "type": "quarantine",
                    "entity_id": event.entity_id,
                    "tick": event.tick,
                    "error": event.error,
                    "trace": [f.as_dict() for f in event.trace],
                })
        return messages

    def snapshot_message(self) -> dict:
        entities = []
        for e in self.scene.entities_in_order():
            entities.append({
                "id": e.id,
                "kind": e.kind,
                "x": quantize(e.x),
                "y": quantize(e.y),
                "w": quantize(e.w),
                "h": quantize(e.h),
                "sprite": _sprite_dict(e.sprite),
                "health": quantize(e.health),
            })
        return {"type": "snapshot", "tick": self.scene.tick_count, "entities": entities}

    def map_message(self) -> dict:
        tm = self.scene.tilemap
        tileset = {
            str(tile_id): {"sprite": _sprite_dict(t.sprite), "walkable": t.walkable}
            for tile_id, t in tm.tileset.items()
        }
        return {
            "type": "map",
            "cols": tm.cols,
            "rows": tm.rows,
            "tile_size": tm.tile_size,
            "width": self.scene.width,
            "height": self.scene.height,
            "background": self.scene.background,
            "grid": [list(row) for row in tm.grid],
            "tileset": tileset,
            "manifest": [entry.as_dict() for entry in self.assets.manifest_entries()],
        }

    # ------------------------------------------------------------------
    # persistence
    # ------------------------------------------------------------------
    def save(self) -> bytes:
        """Current notebook (hide() flags and manifest updates included)."""
        for cell in self.notebook.cells:
            cell.hidden = cell.id in self.hidden_cells
        self.notebook.assets = self.assets.manifest_entries()
        return save_notebook(self.notebook)


def run_replay(notebook: Notebook, schedule: list[ScheduleAction] | None = None,
               ticks: int = 0, base_dir: str | None = None) -> str:
    """Deterministic replay: fresh session, notebook cells at the tick-0
    boundary, scheduled actions at theirs; returns the final state hash.

    A scheduled `control step` performs an extra tick beyond `ticks`.
    """
    schedule = list(schedule or [])
    known = {cell.id for cell in notebook.cells}
    for action in schedule:
        if action.action == "execute" and action.cell_id not in known:
            raise ScheduleError(f"schedule references unknown cell '{action.cell_id}'")

    session = Session(notebook, base_dir=base_dir)
    session.run_all_cells()

    cursor = 0

    def boundary(now: int) -> None:
        nonlocal cursor
        while cursor < len(schedule) and schedule[cursor].tick <= now:
            _apply_action(session, schedule[cursor])
            cursor += 1

    boundary(0)
    for done in range(1, ticks + 1):
        if session.scene is None:
            raise ScheduleError("notebook never started a game; nothing to tick")
        session.tick_once()
        boundary(done)

    if session.scene is None:
        raise ScheduleError("notebook never started a game; nothing to hash")
    return session.scene.state_hash()


def _apply_action(session: Session, action: ScheduleAction) -> None:
    if action.action == "execute":
        session.execute_cell(action.cell_id)
    elif action.action == "input":
        session.handle_message({"type": "input", "key": action.key,
                                "state": action.state})
    elif action.action == "control":
        session.handle_message({"type": "control", "action": action.control})
