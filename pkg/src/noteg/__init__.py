"""noteg: a deterministic 2D game-prototyping notebook.

Code cells written in NoteScript run against a live, fixed-timestep
simulation: they can create maps and entities, hot-swap fields and
behavior functions at run-time, and quarantine anything that throws.
Notebooks (cells + asset manifest + seed) are the shareable unit and
replay to bit-identical state hashes.
"""

from noteg.notebook import Cell, Notebook, load_notebook, save_notebook
from noteg.scene import Scene
from noteg.session import Session, run_replay

__version__ = "0.1.0"

__all__ = ["Cell", "Notebook", "Scene", "Session", "load_notebook",
           "run_replay", "save_notebook", "__version__"]
