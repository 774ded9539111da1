"""Tree-walking evaluator with notebook semantics.

Cells execute top to bottom with eager side effects; when a statement
fails, earlier effects remain and the cell reports a traceback. Entity
field access goes through the live scene: assigning a function to
on_update/on_collide hot-swaps the behavior starting at the next tick,
assigning to a built-in field type-checks, and assigning a fresh name
creates a custom field.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Any

from noteg import config

# One DSL frame costs roughly a dozen Python frames; the host stack must
# be able to carry RECURSION_LIMIT of them before our own guard fires.
sys.setrecursionlimit(max(sys.getrecursionlimit(), config.RECURSION_LIMIT * 40))
from noteg.assets import SpriteRef
from noteg.entity import DAMAGEABLE_KINDS, Entity, EntityRef
from noteg.errors import EngineError, Frame, ScriptError
from noteg.script import nodes as N
from noteg.script.values import (Builtin, Environment, Function, display_text,
                                 type_name, value_repr, values_equal)

NO_VALUE = object()

# entity fields the engine owns; everything else lands in .custom
_VECTOR_FIELDS = {
    "pos": (("x", "y"), ("x", "y")),
    "size": (("w", "h"), ("w", "h")),
    "vel": (("x", "y"), ("vx", "vy")),
}
_READONLY_FIELDS = ("id", "kind", "alive")
_SLOT_FIELDS = ("on_update", "on_collide")
_LIST_COMPONENT = {"x": 0, "w": 0, "y": 1, "h": 1}


@dataclass
class CellResult:
    ok: bool
    value: Any = NO_VALUE          # last expression-statement value
    error: ScriptError | None = None


class _ActiveFrame:
    __slots__ = ("name", "cell_id", "line", "col")

    def __init__(self, name: str, cell_id: str, line: int, col: int):
        self.name = name
        self.cell_id = cell_id
        self.line = line
        self.col = col


class _ReturnSignal(Exception):
    def __init__(self, value: Any):
        self.value = value


class Interpreter:
    """One evaluator per session; not reentrant, runs at tick boundaries."""

    def __init__(self, host, env: Environment | None = None):
        self.host = host
        self.globals = env if env is not None else Environment()
        self.stack: list[_ActiveFrame] = []

    # ------------------------------------------------------------------
    # entry points
    # ------------------------------------------------------------------
    def eval_cell(self, program: N.Program) -> CellResult:
        self.stack = [_ActiveFrame("<cell>", program.cell_id, 1, 1)]
        last = NO_VALUE
        try:
            for stmt in program.body:
                value = self.exec_stmt(stmt, self.globals)
                last = value if value is not NO_VALUE else NO_VALUE
            return CellResult(True, last)
        except ScriptError as err:
            return CellResult(False, NO_VALUE, err)
        finally:
            self.stack = []

    def call_function(self, fn: Any, args: list, node: N.Node | None = None) -> Any:
        """Public call path; also how the engine invokes behavior slots."""
        standalone = not self.stack
        try:
            return self._call(fn, args, node)
        finally:
            if standalone:
                self.stack = []

    # ------------------------------------------------------------------
    # error plumbing
    # ------------------------------------------------------------------
    def fail(self, message: str, node: N.Node | None) -> ScriptError:
        trace: list[Frame] = []
        if self.stack:
            inner = self.stack[-1]
            line = node.line if node is not None else inner.line
            col = node.col if node is not None else inner.col
            trace.append(Frame(inner.name, inner.cell_id, line, col))
            for frame in reversed(self.stack[:-1]):
                trace.append(Frame(frame.name, frame.cell_id, frame.line, frame.col))
        else:
            trace.append(Frame("<host>", "<host>",
                               node.line if node else 0, node.col if node else 0))
        return ScriptError(message, trace)

    def _mark(self, node: N.Node) -> None:
        frame = self.stack[-1]
        frame.line = node.line
        frame.col = node.col

    # ------------------------------------------------------------------
    # statements
    # ------------------------------------------------------------------
    def exec_stmt(self, stmt: N.Stmt, env: Environment) -> Any:
        """Returns the value for expression statements, else NO_VALUE."""
        self._mark(stmt)
        if isinstance(stmt, N.ExprStmt):
            return self.eval(stmt.expr, env)
        if isinstance(stmt, N.Assign):
            self.exec_assign(stmt, env)
            return NO_VALUE
        if isinstance(stmt, N.Return):
            value = self.eval(stmt.value, env) if stmt.value is not None else None
            if len(self.stack) <= 1:
                raise self.fail("return outside a function", stmt)
            raise _ReturnSignal(value)
        if isinstance(stmt, N.If):
            if self.truthy(self.eval(stmt.cond, env), stmt.cond):
                self.exec_block(stmt.then, env)
            elif isinstance(stmt.orelse, N.If):
                self.exec_stmt(stmt.orelse, env)
            elif stmt.orelse is not None:
                self.exec_block(stmt.orelse, env)
            return NO_VALUE
        if isinstance(stmt, N.While):
            while self.truthy(self.eval(stmt.cond, env), stmt.cond):
                self.exec_block(stmt.body, env)
            return NO_VALUE
        if isinstance(stmt, N.ForRange):
            count = self.eval(stmt.count, env)
            if not self._is_number(count):
                raise self.fail(
                    f"type mismatch: range() needs a number, got {type_name(count)}",
                    stmt.count)
            for k in range(max(0, int(count))):
                env.assign(stmt.var, float(k))
                self.exec_block(stmt.body, env)
            return NO_VALUE
        raise self.fail(f"unsupported statement {type(stmt).__name__}", stmt)

    def exec_block(self, block: N.Block, env: Environment) -> None:
        for stmt in block.stmts:
            self.exec_stmt(stmt, env)

    def exec_assign(self, stmt: N.Assign, env: Environment) -> None:
        value = self.eval(stmt.value, env)
        target = stmt.target
        if isinstance(target, N.Ident):
            if isinstance(value, Function) and value.name is None:
                value.name = target.name
            env.assign(target.name, value)
            return
        if isinstance(target, N.FieldAccess):
            self._assign_field(target, value, env)
            return
        if isinstance(target, N.IndexAccess):
            self._assign_index(target, value, env)
            return
        raise self.fail("invalid assignment target", stmt)

    # ------------------------------------------------------------------
    # expressions
    # ------------------------------------------------------------------
    def eval(self, node: N.Expr, env: Environment) -> Any:
        if isinstance(node, N.Num):
            return node.value
        if isinstance(node, N.Str):
            return node.value
        if isinstance(node, N.Bool):
            return node.value
        if isinstance(node, N.Nil):
            return None
        if isinstance(node, N.ListLit):
            return [self.eval(item, env) for item in node.items]
        if isinstance(node, N.Ident):
            try:
                return env.lookup(node.name)
            except KeyError:
                raise self.fail(f"unknown name '{node.name}'", node) from None
        if isinstance(node, N.FieldAccess):
            return self._read_field(node, env)
        if isinstance(node, N.IndexAccess):
            obj = self.eval(node.obj, env)
            index = self.eval(node.index, env)
            return self._index_get(obj, index, node)
        if isinstance(node, N.Call):
            fn = self.eval(node.fn, env)
            args = [self.eval(arg, env) for arg in node.args]
            self._mark(node)
            return self._call(fn, args, node)
        if isinstance(node, N.Unary):
            return self._unary(node, env)
        if isinstance(node, N.Binary):
            return self._binary(node, env)
        if isinstance(node, N.FnLit):
            return Function(node.params, node.body, env, node.cell_id)
        raise self.fail(f"unsupported expression {type(node).__name__}", node)

    # -- calls ----------------------------------------------------------
    def _call(self, fn: Any, args: list, node: N.Node | None) -> Any:
        if isinstance(fn, Builtin):
            if fn.arity is not None and len(args) != fn.arity:
                raise self.fail(
                    f"arity mismatch: expected {fn.arity}, got {len(args)}", node)
            try:
                return fn.fn(args)
            except ScriptError:
                raise
            except EngineError as err:
                raise self.fail(f"{type(err).__name__}: {err}", node) from None
        if isinstance(fn, Function):
            if len(args) != len(fn.params):
                raise self.fail(
                    f"arity mismatch: expected {len(fn.params)}, got {len(args)}", node)
            if len(self.stack) >= config.RECURSION_LIMIT:
                raise self.fail(
                    f"recursion limit exceeded ({config.RECURSION_LIMIT})", node)
            call_env = Environment(fn.env)
            for param, arg in zip(fn.params, args):
                call_env.define(param, arg)
            frame = _ActiveFrame(fn.name or "<anonymous>", fn.cell_id,
                                 fn.body.line, fn.body.col)
            self.stack.append(frame)
            try:
                self.exec_block(fn.body, call_env)
                return None
            except _ReturnSignal as ret:
                return ret.value
            finally:
                self.stack.pop()
        raise self.fail(f"type mismatch: {type_name(fn)} is not callable", node)

    # -- operators ------------------------------------------------------
    @staticmethod
    def _is_number(v: Any) -> bool:
        return isinstance(v, (int, float)) and not isinstance(v, bool)

    def truthy(self, v: Any, node: N.Node) -> bool:
        if v is True:
            return True
        if v is False or v is None:
            return False
        raise self.fail(
            f"type mismatch: expected boolean, got {type_name(v)}", node)

    def _unary(self, node: N.Unary, env: Environment) -> Any:
        if node.op == "not":
            return not self.truthy(self.eval(node.operand, env), node.operand)
        value = self.eval(node.operand, env)
        if not self._is_number(value):
            raise self.fail(
                f"type mismatch: unary '-' needs a number, got {type_name(value)}", node)
        return -float(value)

    def _binary(self, node: N.Binary, env: Environment) -> Any:
        op = node.op
        if op == "and":
            return (self.truthy(self.eval(node.left, env), node.left)
                    and self.truthy(self.eval(node.right, env), node.right))
        if op == "or":
            return (self.truthy(self.eval(node.left, env), node.left)
                    or self.truthy(self.eval(node.right, env), node.right))
        left = self.eval(node.left, env)
        right = self.eval(node.right, env)
        if op == "==":
            return values_equal(left, right)
        if op == "!=":
            return not values_equal(left, right)
        if op in ("<", "<=", ">", ">="):
            if not (self._is_number(left) and self._is_number(right)):
                raise self.fail(
                    f"type mismatch: '{op}' needs numbers, got "
                    f"{type_name(left)} and {type_name(right)}", node)
            l, r = float(left), float(right)
            return {"<": l < r, "<=": l <= r, ">": l > r, ">=": l >= r}[op]
        if op == "+":
            if self._is_number(left) and self._is_number(right):
                return float(left) + float(right)
            if isinstance(left, str) and isinstance(right, str):
                return left + right
            if isinstance(left, list) and isinstance(right, list):
                return left + right
            raise self.fail(
                f"type mismatch: cannot add {type_name(left)} and {type_name(right)}",
                node)
        if op in ("-", "*", "/", "%"):
            if not (self._is_number(left) and self._is_number(right)):
                raise self.fail(
                    f"type mismatch: '{op}' needs numbers, got "
                    f"{type_name(left)} and {type_name(right)}", node)
            l, r = float(left), float(right)
            if op == "-":
                return l - r
            if op == "*":
                return l * r
            if r == 0.0:
                raise self.fail("division by zero", node)
            return l / r if op == "/" else l % r
        raise self.fail(f"unsupported operator '{op}'", node)

    # -- entity plumbing --------------------------------------------------
    def _deref(self, ref: EntityRef, node: N.Node) -> Entity:
        scene = self.host.scene
        if scene is None:
            raise self.fail("no scene is running", node)
        entity = scene.entities.get(ref.id)
        if entity is None:
            raise self.fail(f"dangling entity ref: entity {ref.id} no longer exists", node)
        return entity

    def _read_field(self, node: N.FieldAccess, env: Environment) -> Any:
        obj = self.eval(node.obj, env)
        if isinstance(obj, EntityRef):
            return self._entity_get(obj, node.name, node)
        if isinstance(obj, list):
            comp = _LIST_COMPONENT.get(node.name)
            if comp is None:
                raise self.fail(f"unknown field '{node.name}' on a list", node)
            if comp >= len(obj):
                raise self.fail(
                    f"index out of range: list has {len(obj)} elements", node)
            return obj[comp]
        raise self.fail(
            f"unknown field '{node.name}' on {type_name(obj)}", node)

    def _entity_get(self, ref: EntityRef, name: str, node: N.Node) -> Any:
        entity = self._deref(ref, node)
        if name == "id":
            return float(entity.id)
        if name == "name":
            return entity.name
        if name == "kind":
            return entity.kind
        if name == "pos":
            return [entity.x, entity.y]
        if name == "size":
            return [entity.w, entity.h]
        if name == "vel":
            return [entity.vx, entity.vy]
        if name == "health":
            return entity.health
        if name == "speed":
            return entity.speed
        if name == "sprite":
            return entity.sprite
        if name == "on_update":
            return entity.on_update
        if name == "on_collide":
            return entity.on_collide
        if name == "alive":
            return entity.alive
        if name in entity.custom:
            return entity.custom[name]
        raise self.fail(f"unknown field '{name}'", node)

    def _entity_set(self, ref: EntityRef, name: str, value: Any, node: N.Node) -> None:
        entity = self._deref(ref, node)
        if name in _READONLY_FIELDS:
            raise self.fail(f"field '{name}' is read-only", node)
        if name in _VECTOR_FIELDS:
            ok = (isinstance(value, list) and len(value) == 2
                  and all(self._is_number(v) for v in value))
            if not ok:
                raise self.fail(
                    f"type mismatch: {name} needs a list of two numbers", node)
            _, attrs = _VECTOR_FIELDS[name]
            setattr(entity, attrs[0], float(value[0]))
            setattr(entity, attrs[1], float(value[1]))
            return
        if name in ("health", "speed"):
            if not self._is_number(value):
                raise self.fail(
                    f"type mismatch: {name} must be a number, got {type_name(value)}",
                    node)
            setattr(entity, name, float(value))
            if name == "health" and entity.kind in DAMAGEABLE_KINDS:
                entity.health = max(entity.health, 0.0)
            return
        if name == "name":
            if not (value is None or isinstance(value, str)):
                raise self.fail("type mismatch: name must be a string or nil", node)
            entity.name = value
            return
        if name == "sprite":
            if not (value is None or isinstance(value, SpriteRef)):
                raise self.fail("type mismatch: sprite must be a sprite or nil", node)
            entity.sprite = value
            return
        if name in _SLOT_FIELDS:
            if not (value is None or isinstance(value, (Function, Builtin))):
                raise self.fail(
                    f"type mismatch: {name} must be a function or nil", node)
            setattr(entity, name, value)
            return
        entity.custom[name] = value

    def _entity_set_component(self, ref: EntityRef, vec: str, comp: str,
                              value: Any, node: N.Node) -> None:
        comps, attrs = _VECTOR_FIELDS[vec]
        if comp not in comps:
            raise self.fail(f"unknown field '{vec}.{comp}'", node)
        if not self._is_number(value):
            raise self.fail(
                f"type mismatch: {vec}.{comp} must be a number, got {type_name(value)}",
                node)
        entity = self._deref(ref, node)
        setattr(entity, attrs[comps.index(comp)], float(value))

    def _assign_field(self, target: N.FieldAccess, value: Any, env: Environment) -> None:
        # `e.pos.x = v` must write through the entity, not a copied list
        if isinstance(target.obj, N.FieldAccess) and target.obj.name in _VECTOR_FIELDS:
            base = self.eval(target.obj.obj, env)
            if isinstance(base, EntityRef):
                self._entity_set_component(base, target.obj.name, target.name,
                                           value, target)
                return
        obj = self.eval(target.obj, env)
        if isinstance(obj, EntityRef):
            self._entity_set(obj, target.name, value, target)
            return
        if isinstance(obj, list):
            comp = _LIST_COMPONENT.get(target.name)
            if comp is None:
                raise self.fail(f"unknown field '{target.name}' on a list", target)
            if comp >= len(obj):
                raise self.fail(
                    f"index out of range: list has {len(obj)} elements", target)
            obj[comp] = value
            return
        raise self.fail(
            f"cannot assign field '{target.name}' on {type_name(obj)}", target)

    def _assign_index(self, target: N.IndexAccess, value: Any, env: Environment) -> None:
        if isinstance(target.obj, N.FieldAccess) and target.obj.name in _VECTOR_FIELDS:
            base = self.eval(target.obj.obj, env)
            if isinstance(base, EntityRef):
                index = self.eval(target.index, env)
                comps, _ = _VECTOR_FIELDS[target.obj.name]
                idx = self._check_index(index, 2, target)
                self._entity_set_component(base, target.obj.name, comps[idx],
                                           value, target)
                return
        obj = self.eval(target.obj, env)
        index = self.eval(target.index, env)
        if not isinstance(obj, list):
            raise self.fail(f"type mismatch: cannot index {type_name(obj)}", target)
        obj[self._check_index(index, len(obj), target)] = value

    def _check_index(self, index: Any, length: int, node: N.Node) -> int:
        if not self._is_number(index) or float(index) != int(index):
            raise self.fail("type mismatch: index must be a whole number", node)
        idx = int(index)
        if not (0 <= idx < length):
            raise self.fail(
                f"index out of range: {idx} (length {length})", node)
        return idx

    def _index_get(self, obj: Any, index: Any, node: N.Node) -> Any:
        if isinstance(obj, list):
            return obj[self._check_index(index, len(obj), node)]
        if isinstance(obj, str):
            return obj[self._check_index(index, len(obj), node)]
        raise self.fail(f"type mismatch: cannot index {type_name(obj)}", node)


__all__ = ["Interpreter", "CellResult", "NO_VALUE", "display_text", "value_repr"]
