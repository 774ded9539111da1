"""The surface cells see behind the builtins: scene slot, assets, events.

Session subclasses this for real use; tests use it directly.
"""

from __future__ import annotations

from noteg.assets import SheetStore
from noteg.errors import AlreadyStarted
from noteg.events import EngineEvent
from noteg.scene import Scene


class GameHost:
    def __init__(self, seed: int = 0, base_dir: str | None = None):
        self.scene: Scene | None = None
        self.assets = SheetStore()
        self.base_dir = base_dir
        self.seed = seed
        self.running = False
        self.pending_events: list[EngineEvent] = []
        self.hidden_cells: set[str] = set()

    def create_scene(self, width: float, height: float, background: str) -> Scene:
        if self.scene is not None:
            raise AlreadyStarted("a game is already running (only one at a time)")
        self.scene = Scene(width, height, background, self.seed)
        self.running = True
        return self.scene

    def emit(self, event: EngineEvent) -> None:
        # keep ordering with engine events when a scene exists
        if self.scene is not None:
            self.scene.emit(event)
        else:
            self.pending_events.append(event)

    def drain_events(self) -> list[EngineEvent]:
        drained = self.pending_events
        self.pending_events = []
        if self.scene is not None:
            drained = drained + self.scene.drain_events()
        return drained

    def map_installed(self) -> None:
        """Hook for the session to broadcast the map message."""

    def hide_cell(self, cell_id: str) -> None:
        self.hidden_cells.add(cell_id)
