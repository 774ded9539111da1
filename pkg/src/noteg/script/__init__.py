"""NoteScript: the cell scripting language.

A small tree-walking language with 64-bit float numbers, strings,
booleans, nil, lists, entity/sprite refs, and first-class functions
with closures. Cells share one persistent global scope; behavior
functions assigned to entity slots are invoked by the engine each
tick.
"""

from noteg.script.parser import parse
from noteg.script.interpreter import CellResult, Interpreter, NO_VALUE
from noteg.script.values import Builtin, Environment, Function, value_repr

__all__ = [
    "parse", "Interpreter", "CellResult", "NO_VALUE",
    "Builtin", "Environment", "Function", "value_repr",
]
