"""Evaluator semantics: scopes, closures, errors, and entity plumbing."""

from __future__ import annotations

import pytest

from noteg import config
from noteg.engine import tick
from noteg.entity import EntityRef, EntitySpec
from noteg.scene import Scene
from noteg.script.interpreter import NO_VALUE, Interpreter
from noteg.script.parser import parse
from noteg.script.values import Builtin, Environment, Function, value_repr

from conftest import open_map


class Host:
    def __init__(self, scene=None):
        self.scene = scene


@pytest.fixture
def interp():
    return Interpreter(Host())


@pytest.fixture
def scene_interp():
    scene = Scene(800, 600, "#202020", seed=1)
    scene.tilemap = open_map(25, 19)
    return Interpreter(Host(scene))


def run(interp, source, cell_id="c1"):
    return interp.eval_cell(parse(source, cell_id))


def run_ok(interp, source, cell_id="c1"):
    result = run(interp, source, cell_id)
    assert result.ok, result.error and result.error.message
    return result


# ----------------------------------------------------------------------
# environment / functions
# ----------------------------------------------------------------------
def test_env_persists_across_cells(interp):
    run_ok(interp, "x = 2", "c1")
    result = run_ok(interp, "x * 21", "c2")
    assert result.value == 42.0


def test_last_expression_is_the_cell_value(interp):
    assert run_ok(interp, "1 + 1").value == 2.0
    assert run_ok(interp, "y = 5").value is NO_VALUE
    assert run_ok(interp, "5\n7").value == 7.0


def test_function_call_and_return(interp):
    result = run_ok(interp, "add = fn(a, b) { return a + b }\nadd(2, 3)")
    assert result.value == 5.0


def test_arity_mismatch_message(interp):
    run_ok(interp, "f = fn(a) { return a }")
    result = run(interp, "f()")
    assert not result.ok
    assert result.error.message == "arity mismatch: expected 1, got 0"


def test_closure_counter(interp):
    run_ok(interp, """
make = fn() {
  n = 0
  return fn() {
    n = n + 1
    return n
  }
}
c = make()
""")
    assert run_ok(interp, "c()").value == 1.0
    assert run_ok(interp, "c()").value == 2.0
    assert run_ok(interp, "c()").value == 3.0


def test_two_closures_do_not_share_state(interp):
    run_ok(interp, "make = fn() { n = 0\n return fn() { n = n + 1\n return n } }")
    run_ok(interp, "a = make()\nb = make()")
    assert run_ok(interp, "a()").value == 1.0
    assert run_ok(interp, "a()").value == 2.0
    assert run_ok(interp, "b()").value == 1.0


def test_recursion_limit(interp):
    result = run(interp, "loop = fn() { return loop() }\nloop()")
    assert not result.ok
    assert "recursion limit" in result.error.message


def test_control_flow(interp):
    result = run_ok(interp, """
total = 0
for i in range(5) {
  if i % 2 == 0 {
    total = total + i
  } else {
    total = total - 1
  }
}
while total < 10 {
  total = total + 4
}
total
""")
    assert result.value == 12.0   # (0+2+4) - 2 = 4, then 8, 12


def test_division_by_zero(interp):
    result = run(interp, "1 / 0")
    assert not result.ok
    assert result.error.message == "division by zero"


def test_unknown_name(interp):
    result = run(interp, "nope + 1")
    assert not result.ok
    assert "unknown name 'nope'" in result.error.message


def test_list_operations(interp):
    result = run_ok(interp, "xs = [1, 2, 3]\nxs[1] = 20\nxs[0] + xs[1] + xs[2]")
    assert result.value == 24.0
    bad = run(interp, "[1][5]")
    assert not bad.ok and "index out of range" in bad.error.message


def test_string_concat_and_repr(interp):
    assert run_ok(interp, '"ab" + "cd"').value == "abcd"
    assert value_repr(run_ok(interp, '"a\\"b"').value) == '"a\\"b"'


def test_builtins_are_callable(interp):
    interp.globals.define("twice", Builtin("twice", lambda args: args[0] * 2, 1))
    assert run_ok(interp, "twice(21)").value == 42.0
    result = run(interp, "twice(1, 2)")
    assert not result.ok and "arity mismatch" in result.error.message


# ----------------------------------------------------------------------
# error isolation + traces
# ----------------------------------------------------------------------
def test_effects_before_failure_remain(interp):
    result = run(interp, "a = 1\nb = 2\nboom()\nc = 3")
    assert not result.ok
    assert interp.globals.lookup("a") == 1.0
    assert interp.globals.lookup("b") == 2.0
    with pytest.raises(KeyError):
        interp.globals.lookup("c")


def test_trace_innermost_first(interp):
    result = run(interp, """
inner = fn() { return 1 / 0 }
outer = fn() { return inner() }
outer()
""", cell_id="cell-9")
    assert not result.ok
    trace = result.error.trace
    assert len(trace) == 3
    assert trace[0].fn == "inner"
    assert trace[1].fn == "outer"
    assert trace[2].fn == "<cell>"
    assert all(frame.cell_id == "cell-9" for frame in trace)
    assert trace[0].line == 2   # the division inside `inner`


def test_trace_spans_defining_cells(interp):
    run_ok(interp, "helper = fn() { return missing_name }", cell_id="lib")
    result = run(interp, "helper()", cell_id="use")
    assert not result.ok
    assert result.error.trace[0].cell_id == "lib"
    assert result.error.trace[1].cell_id == "use"


# ----------------------------------------------------------------------
# entity fields / hot-swap
# ----------------------------------------------------------------------
def spawn(scene, **kw) -> int:
    spec = dict(kind="enemy", x=100.0, y=100.0)
    spec.update(kw)
    return scene.spawn(EntitySpec(**spec))


def test_entity_field_read_write(scene_interp):
    scene = scene_interp.host.scene
    eid = spawn(scene)
    scene_interp.globals.define("e", EntityRef(eid))
    assert run_ok(scene_interp, "e.health").value == 100.0
    run_ok(scene_interp, "e.health = 55")
    assert scene.entities[eid].health == 55.0
    assert run_ok(scene_interp, "e.pos").value == [100.0, 100.0]
    run_ok(scene_interp, "e.pos.x = e.pos.x + 10")
    assert scene.entities[eid].x == 110.0
    run_ok(scene_interp, "e.pos = [5, 6]")
    assert (scene.entities[eid].x, scene.entities[eid].y) == (5.0, 6.0)


def test_builtin_field_type_checks(scene_interp):
    scene = scene_interp.host.scene
    eid = spawn(scene)
    scene_interp.globals.define("e", EntityRef(eid))
    result = run(scene_interp, 'e.health = "full"')
    assert not result.ok and "type mismatch" in result.error.message
    result = run(scene_interp, "e.pos = [1, 2, 3]")
    assert not result.ok
    result = run(scene_interp, "e.id = 9")
    assert not result.ok and "read-only" in result.error.message


def test_unknown_subfield_rejected(scene_interp):
    eid = spawn(scene_interp.host.scene)
    scene_interp.globals.define("e", EntityRef(eid))
    result = run(scene_interp, "e.pos.z = 1")
    assert not result.ok and "unknown field 'pos.z'" in result.error.message


def test_custom_fields_created_on_fresh_names(scene_interp):
    scene = scene_interp.host.scene
    eid = spawn(scene)
    scene_interp.globals.define("e", EntityRef(eid))
    run_ok(scene_interp, "e.score = 3")
    assert scene.entities[eid].custom["score"] == 3.0
    assert run_ok(scene_interp, "e.score + 1").value == 4.0
    result = run(scene_interp, "e.unset_field")
    assert not result.ok and "unknown field 'unset_field'" in result.error.message


def test_custom_list_mutates_in_place(scene_interp):
    scene = scene_interp.host.scene
    eid = spawn(scene)
    scene_interp.globals.define("e", EntityRef(eid))
    run_ok(scene_interp, "e.tags = [1, 2]\ne.tags[0] = 9")
    assert scene.entities[eid].custom["tags"] == [9.0, 2.0]


def test_dangling_ref_is_an_error_not_ub(scene_interp):
    scene = scene_interp.host.scene
    eid = spawn(scene)
    scene_interp.globals.define("e", EntityRef(eid))
    scene.despawn(eid)
    result = run(scene_interp, "e.health")
    assert not result.ok
    assert "dangling" in result.error.message


def test_hot_swapped_behavior_drifts_right(scene_interp):
    scene = scene_interp.host.scene
    eid = spawn(scene, x=96.0, y=96.0)
    scene_interp.globals.define("e", EntityRef(eid))
    run_ok(scene_interp, "e.on_update = fn(self, dt) { self.pos.x = self.pos.x + 1 }")
    start_x = scene.entities[eid].x
    for _ in range(60):
        tick(scene, scene_interp.call_function)
    # +1 px per tick = 60 px over a second of game time
    assert scene.entities[eid].x == pytest.approx(start_x + 60.0)


def test_behavior_error_quarantines_via_engine(scene_interp):
    scene = scene_interp.host.scene
    eid = spawn(scene)
    scene_interp.globals.define("e", EntityRef(eid))
    run_ok(scene_interp, "e.on_update = fn(self, dt) { self.missing_field }")
    tick(scene, scene_interp.call_function)
    assert eid not in scene.entities
    assert len(scene.quarantine_log) == 1
    record = scene.quarantine_log[0]
    assert "unknown field 'missing_field'" in record.error
    assert record.trace


def test_projectile_speed_retarget(scene_interp):
    scene = scene_interp.host.scene
    eid = spawn(scene, kind="projectile", x=100.0, y=100.0, w=4.0, h=4.0,
                vx=240.0, vy=0.0, speed=240.0)
    scene_interp.globals.define("bullet", EntityRef(eid))
    run_ok(scene_interp, "bullet.speed = 400")
    x0 = scene.entities[eid].x
    tick(scene, scene_interp.call_function)
    assert scene.entities[eid].x - x0 == pytest.approx(400.0 * config.TICK_DT)


def test_function_values_survive_in_custom_fields(scene_interp):
    scene = scene_interp.host.scene
    eid = spawn(scene)
    scene_interp.globals.define("e", EntityRef(eid))
    run_ok(scene_interp, "e.helper = fn() { return 7 }")
    assert isinstance(scene.entities[eid].custom["helper"], Function)
    assert run_ok(scene_interp, "e.helper()").value == 7.0
