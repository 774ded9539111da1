"""Command line: serve a live notebook, or replay/check/hash one headless."""

from __future__ import annotations

import argparse
import os
import sys

from noteg.errors import ParseError, ScheduleError, SchemaError
from noteg.notebook import load_notebook_file
from noteg.script.parser import parse as parse_cell
from noteg.session import load_schedule, run_replay


def _load_notebook(path: str):
    try:
        return load_notebook_file(path)
    except FileNotFoundError:
        raise SystemExit(f"error: notebook not found: {path}")
    except SchemaError as err:
        raise SystemExit(f"error: bad notebook {path}: {err}")


def cmd_check(args) -> int:
    notebook = _load_notebook(args.notebook)
    for cell in notebook.code_cells():
        try:
            parse_cell(cell.source, cell.id)
        except ParseError as err:
            print(f"{args.notebook}: cell {cell.id}: line {err.line}, "
                  f"col {err.col}: {err.message}")
            return 1
    print(f"{args.notebook}: {len(notebook.code_cells())} code cells parse")
    return 0


def _replay(args, schedule) -> int:
    notebook = _load_notebook(args.notebook)
    base_dir = os.path.dirname(os.path.abspath(args.notebook))
    try:
        digest = run_replay(notebook, schedule, ticks=args.ticks, base_dir=base_dir)
    except ScheduleError as err:
        raise SystemExit(f"error: {err}")
    if getattr(args, "hash", False) or args.command == "hash":
        print(digest)
    else:
        print(f"replayed {args.ticks} ticks of {args.notebook}")
        print(digest)
    return 0


def cmd_replay(args) -> int:
    schedule = []
    if args.schedule:
        try:
            with open(args.schedule, "rb") as fh:
                schedule = load_schedule(fh.read())
        except FileNotFoundError:
            raise SystemExit(f"error: schedule not found: {args.schedule}")
        except ScheduleError as err:
            raise SystemExit(f"error: bad schedule {args.schedule}: {err}")
    return _replay(args, schedule)


def cmd_hash(args) -> int:
    return _replay(args, [])


def cmd_serve(args) -> int:
    import uvicorn

    from noteg.server import create_app
    from noteg.session import Session

    notebook = _load_notebook(args.notebook)
    if args.seed is not None:
        notebook.seed = args.seed
    base_dir = os.path.dirname(os.path.abspath(args.notebook))
    session = Session(notebook, base_dir=base_dir)
    app = create_app(session, auto_tick=True)
    print(f"serving {args.notebook} on http://{args.host}:{args.port}/ "
          f"(seed {notebook.seed})")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="noteg",
        description="Live game-prototyping notebook: serve it in a browser, "
                    "or replay it headless and deterministically.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the notebook server")
    p_serve.add_argument("--notebook", required=True)
    p_serve.add_argument("--port", type=int, default=8750)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--seed", type=int, default=None,
                         help="override the notebook's seed")
    p_serve.set_defaults(fn=cmd_serve)

    p_replay = sub.add_parser("replay", help="headless deterministic replay")
    p_replay.add_argument("--notebook", required=True)
    p_replay.add_argument("--schedule", default=None,
                          help="JSON schedule of execute/input/control actions")
    p_replay.add_argument("--ticks", type=int, required=True)
    p_replay.add_argument("--hash", action="store_true",
                          help="print only the final state hash")
    p_replay.set_defaults(fn=cmd_replay)

    p_check = sub.add_parser("check", help="parse every code cell")
    p_check.add_argument("--notebook", required=True)
    p_check.set_defaults(fn=cmd_check)

    p_hash = sub.add_parser("hash", help="run cells at tick 0, tick N times, "
                                         "print the state hash")
    p_hash.add_argument("--notebook", required=True)
    p_hash.add_argument("--ticks", type=int, required=True)
    p_hash.set_defaults(fn=cmd_hash)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
