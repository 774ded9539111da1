"""Acceptance gate: every top-level criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion. Each criterion is one test; the printed line states the
measured numbers next to the bound they must meet.
"""

from __future__ import annotations

import json
import math
import random
import string
import time

from noteg.cli import main as cli_main
from noteg.engine import tick
from noteg.errors import ParseError, SchemaError
from noteg.events import CallbackFired
from noteg.notebook import (Cell, Notebook, load_notebook, load_notebook_file,
                            save_notebook)
from noteg.pathfinding import find_path
from noteg.script.interpreter import Interpreter
from noteg.script.parser import parse
from noteg.session import ScheduleAction, Session, run_replay

from test_parser import _bool_tree, _eval_source, _num_tree
from test_pathfinding import bfs_path_length, random_map, walkable_cells
from test_properties import assert_no_wall_overlap
from test_session import SHEET


def report(name: str, detail: str) -> None:
    print(f"ACCEPTANCE PASS [{name}] {detail}")


def _load(name: str) -> Notebook:
    return load_notebook_file(f"notebooks/{name}.noteg.json")


# ----------------------------------------------------------------------
# 1. Determinism: 10 identical 600-tick replays in under 5 s
# ----------------------------------------------------------------------
def test_determinism_ten_replays_under_five_seconds():
    started = time.perf_counter()
    hashes = {run_replay(_load("determinism"), ticks=600, base_dir="notebooks")
              for _ in range(10)}
    elapsed = time.perf_counter() - started
    assert len(hashes) == 1, f"got {len(hashes)} distinct hashes"
    assert elapsed < 5.0, f"took {elapsed:.2f}s (budget 5s)"
    report("determinism", f"10/10 identical hashes in {elapsed:.2f}s (< 5s)")


# ----------------------------------------------------------------------
# 2. Pathfinding vs BFS oracle on 100 random maps in under 2 s
# ----------------------------------------------------------------------
def test_pathfinding_matches_bfs_oracle_under_two_seconds():
    rng = random.Random(314159)
    started = time.perf_counter()
    reachable = unreachable = 0
    for _ in range(100):
        tm = random_map(rng, cols=20, rows=20, wall_chance=0.3)
        cells = walkable_cells(tm)
        if len(cells) < 2:
            continue
        start, goal = rng.sample(cells, 2)
        expected = bfs_path_length(tm, start, goal)
        path = find_path(tm, start, goal)
        if expected is None:
            assert path is None, "A* found a path BFS says cannot exist"
            unreachable += 1
        else:
            assert path is not None, "A* missed a path BFS found"
            assert len(path) - 1 == expected, (
                f"A* length {len(path) - 1} != BFS {expected}")
            reachable += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 2.0, f"took {elapsed:.2f}s (budget 2s)"
    report("pathfinding-oracle",
           f"{reachable} reachable + {unreachable} unreachable cases agree "
           f"with BFS in {elapsed:.2f}s (< 2s)")


# ----------------------------------------------------------------------
# 3. Quarantine: 1 of 3 enemies hot-swapped into throwing, 120 ticks
# ----------------------------------------------------------------------
def test_quarantine_removes_exactly_the_faulty_enemy():
    faulty = Session(_load("quarantine"), base_dir="notebooks")
    faulty.run_all_cells()
    control_nb = _load("quarantine")
    control_nb.cells = [c for c in control_nb.cells if c.id != "c5"]
    control = Session(control_nb, base_dir="notebooks")
    control.run_all_cells()

    for _ in range(120):
        faulty.tick_once()
        control.tick_once()

    scene = faulty.scene
    enemies = [e for e in scene.entities.values() if e.kind == "enemy"]
    assert len(enemies) == 2, f"{len(enemies)} enemies remain, expected 2"
    assert len(scene.quarantine_log) == 1
    record = scene.quarantine_log[0]
    assert record.trace, "quarantine record has an empty trace"

    player = scene.player()
    twin_player = control.scene.player()
    assert (player.x, player.y, player.health) == (
        twin_player.x, twin_player.y, twin_player.health), "player was affected"
    # the faulty enemy never collided, so survivors match exactly
    for entity in enemies:
        twin = control.scene.entities[entity.id]
        assert (entity.x, entity.y, entity.health) == (twin.x, twin.y, twin.health)
    report("quarantine",
           "2 enemies + player match the fault-free run exactly; "
           "1 record with a populated trace")


# ----------------------------------------------------------------------
# 4. Callback statistics: 4-sigma binomial bounds over 10,000 ticks
# ----------------------------------------------------------------------
def test_callback_counts_within_four_sigma():
    outcomes = []
    for p, seed in ((0.1, 11), (0.5, 42), (0.9, 90)):
        nb = Notebook(seed=seed, assets=[], cells=[
            Cell("c1", "code", False,
                 f'start_game(320, 320, "#000000")\n'
                 f"n = 0\n"
                 f"callback_prob(fn() {{ n = n + 1 }}, {p})\n"),
        ])
        session = Session(nb)
        session.run_all_cells()
        fired = 0
        for _ in range(10000):
            events = tick(session.scene, session.interp.call_function)
            fired += sum(isinstance(ev, CallbackFired) for ev in events)
        bound = 4.0 * math.sqrt(10000 * p * (1.0 - p))
        delta = abs(fired - 10000 * p)
        assert delta <= bound, (
            f"p={p}: fired {fired}, |delta|={delta:.0f} exceeds 4 sigma={bound:.0f}")
        assert session.interp.globals.lookup("n") == float(fired)
        outcomes.append(f"p={p}: {fired} fires (|delta| {delta:.0f} <= {bound:.0f})")
    report("callback-statistics", "; ".join(outcomes))


# ----------------------------------------------------------------------
# 5. Interpreter: precedence property, parser fuzz, closure counter
# ----------------------------------------------------------------------
def test_interpreter_precedence_fuzz_and_closures():
    rng = random.Random(271828)
    for case in range(1000):
        tree = _bool_tree(rng, 4) if case % 2 else _num_tree(rng, 4)
        assert _eval_source(tree.render(True)) == _eval_source(tree.render(False))

    pool = (string.ascii_letters + string.digits
            + ' \t\n"#(){}[].,;=<>!+-*/%_@$^&|~`?:')
    for _ in range(10000):
        source = "".join(rng.choice(pool) for _ in range(rng.randint(0, 50)))
        try:
            parse(source)
        except ParseError:
            pass

    class _Host:
        scene = None

    interp = Interpreter(_Host())
    interp.eval_cell(parse(
        "make = fn() { n = 0\n return fn() { n = n + 1\n return n } }\nc = make()"))
    values = [interp.eval_cell(parse("c()")).value for _ in range(3)]
    assert values == [1.0, 2.0, 3.0], f"counter yielded {values}"
    report("interpreter",
           "1000 precedence cases agree; 10000 fuzz strings parse or "
           "ParseError; closure counter 1,2,3")


# ----------------------------------------------------------------------
# 6. Command-set coverage: the tour notebook
# ----------------------------------------------------------------------
def test_tour_notebook_covers_the_full_api():
    tour = _load("tour")
    all_source = "\n".join(c.source for c in tour.code_cells())
    for fn in ("start_game", "create_map", "create_player", "add_trinket",
               "spawn_enemy", "callback_prob", "refresh_scene"):
        assert fn in all_source, f"tour never calls {fn}"

    assert cli_main(["check", "--notebook", "notebooks/tour.noteg.json"]) == 0

    h1 = run_replay(_load("tour"), ticks=120, base_dir="notebooks")
    h2 = run_replay(_load("tour"), ticks=120, base_dir="notebooks")
    assert h1 == h2, "tour replay is not deterministic"

    session = Session(_load("tour"), base_dir="notebooks")
    session.run_all_cells()
    entities = list(session.scene.entities.values())
    assert len(entities) == 1, f"{len(entities)} entities after refresh_scene"
    assert entities[0].kind == "player"
    assert session.scene.tilemap is not None
    report("command-set-coverage",
           "all seven calls present; check exits 0; replay deterministic; "
           "refresh leaves exactly the player + tilemap")


# ----------------------------------------------------------------------
# 7. Wall impermeability: 50 random schedules x 300 ticks
# ----------------------------------------------------------------------
def test_wall_impermeability_over_random_schedules():
    rng = random.Random(0x5EED)
    keys = ("up", "down", "left", "right")
    frames_checked = 0
    for run in range(50):
        session = Session(_load("determinism"), base_dir="notebooks")
        session.run_all_cells()
        schedule = []
        tick_at = 0
        for _ in range(rng.randrange(2, 12)):
            tick_at += rng.randrange(40)
            schedule.append(ScheduleAction(tick_at, "input",
                                           key=rng.choice(keys),
                                           state=rng.choice(("down", "up"))))
        cursor = 0
        for done in range(300):
            while cursor < len(schedule) and schedule[cursor].tick <= done:
                action = schedule[cursor]
                session.handle_message({"type": "input", "key": action.key,
                                        "state": action.state})
                cursor += 1
            session.tick_once()
            assert_no_wall_overlap(session.scene)
            frames_checked += 1
    report("wall-impermeability",
           f"{frames_checked} frames across 50 schedules, zero overlaps")


# ----------------------------------------------------------------------
# 8. Notebook format: canonical round-trip + every SchemaError
# ----------------------------------------------------------------------
def test_notebook_roundtrip_and_schema_errors():
    for name in ("tour", "determinism", "quarantine"):
        with open(f"notebooks/{name}.noteg.json", "rb") as fh:
            data = fh.read()
        assert save_notebook(load_notebook(data)) == data, (
            f"{name} does not round-trip byte-identically")

    base = json.loads(save_notebook(_load("tour")).decode())

    def corrupt(mutate):
        raw = json.loads(json.dumps(base))
        mutate(raw)
        try:
            load_notebook(json.dumps(raw))
        except SchemaError as err:
            return err
        raise AssertionError(f"schema accepted a corrupt notebook ({mutate})")

    cases = {
        "unsupported version": corrupt(lambda r: r.update(version=2)),
        "duplicate cell id": corrupt(
            lambda r: r["cells"].append(dict(r["cells"][1]))),
        "duplicate asset": corrupt(
            lambda r: r["assets"].append(dict(r["assets"][0]))),
        "absolute path": corrupt(
            lambda r: r["assets"][0].update(path="/abs.png")),
        "bad kind": corrupt(lambda r: r["cells"][0].update(kind="md")),
        "missing field": corrupt(lambda r: r["cells"][0].pop("source")),
        "bad hidden": corrupt(lambda r: r["cells"][0].update(hidden=1)),
        "bool seed": corrupt(lambda r: r.update(seed=True)),
        "zero tile": corrupt(lambda r: r["assets"][0].update(tile_w=0)),
        "unknown field": corrupt(lambda r: r.update(extra=1)),
    }
    for label, err in cases.items():
        assert isinstance(err, SchemaError), label
    for junk in (b"{", b"\xff\xfebad", b"[]"):
        try:
            load_notebook(junk)
            raise AssertionError(f"accepted junk {junk!r}")
        except SchemaError:
            pass
    report("notebook-format",
           f"3 fixtures round-trip byte-identically; "
           f"{len(cases) + 3} SchemaError cases fire")
