"""The prototyping vocabulary cells get out of the box.

Game API: start_game, create_map, create_player, add_trinket,
spawn_enemy, callback_prob, refresh_scene. Utilities: scene_list,
despawn, distance, spawn_projectile, rand, print, hide, load_sheet,
sheet_sprite, plus a few numeric helpers.
"""

from __future__ import annotations

import math
import re

from noteg import behaviors, config
from noteg.assets import SpriteRef, sheet_sprite as slice_sheet
from noteg.entity import EntityRef, EntitySpec
from noteg.errors import (ArityMismatch, BadDimensions, BadProbability,
                          InvalidColor, NoPlayer, NoScene, PlayerExists,
                          RaggedGrid, TypeMismatch, UnknownTileId)
from noteg.events import Print
from noteg.host import GameHost
from noteg.scene import Callback, Scene
from noteg.script.interpreter import Interpreter
from noteg.script.values import Builtin, Environment, Function, display_text, type_name
from noteg.tilemap import TileDef, Tilemap

_COLOR_RE = re.compile(r"^#[0-9a-fA-F]{6}$")


def refresh_scene_state(scene: Scene) -> None:
    """Back to base state: only the player and the tilemap remain.

    Player position/health are preserved, callbacks are cleared, and the
    quarantine log stays (it is history, not scene state).
    """
    doomed = [eid for eid, e in scene.entities.items() if e.kind != "player"]
    for eid in doomed:
        scene._remove(eid)
    scene.callbacks = []


def _number(args, i, what) -> float:
    v = args[i]
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    raise TypeMismatch(f"{what} must be a number, got {type_name(v)}")


def _string(args, i, what) -> str:
    v = args[i]
    if isinstance(v, str):
        return v
    raise TypeMismatch(f"{what} must be a string, got {type_name(v)}")


def _sprite(args, i, what) -> SpriteRef:
    v = args[i]
    if isinstance(v, SpriteRef):
        return v
    raise TypeMismatch(f"{what} must be a sprite, got {type_name(v)}")


def _entity(args, i, what) -> EntityRef:
    v = args[i]
    if isinstance(v, EntityRef):
        return v
    raise TypeMismatch(f"{what} must be an entity, got {type_name(v)}")


def _color(args, i, what) -> str:
    v = args[i]
    if not isinstance(v, str) or not _COLOR_RE.match(v):
        raise InvalidColor(f"{what} must be '#RRGGBB', got {v!r}")
    return v.lower()


def install_builtins(env: Environment, host: GameHost, interp: Interpreter) -> None:
    def scene() -> Scene:
        if host.scene is None:
            raise NoScene("no game is running; call start_game first")
        return host.scene

    def deref(ref: EntityRef):
        sc = scene()
        entity = sc.entities.get(ref.id)
        if entity is None:
            raise TypeMismatch(f"entity {ref.id} no longer exists")
        return entity

    def register(name: str, fn, arity: int | None):
        env.define(name, Builtin(name, fn, arity))

    # ------------------------------------------------------------------
    # game API
    # ------------------------------------------------------------------
    def bi_start_game(args):
        width = _number(args, 0, "width")
        height = _number(args, 1, "height")
        color = _color(args, 2, "window colour")
        if width <= 0 or height <= 0:
            raise BadDimensions("scene dimensions must be positive")
        host.create_scene(width, height, color)
        return None

    def bi_create_map(args):
        sc = scene()
        ts = config.DEFAULT_TILE_SIZE
        if len(args) == 1:
            floor = _sprite(args, 0, "floor sprite")
            cols = math.ceil(sc.width / ts)
            rows = math.ceil(sc.height / ts)
            grid = [[0] * cols for _ in range(rows)]
            tileset = {0: TileDef(floor, True)}
        elif len(args) == 3:
            raw = args[0]
            floor = _sprite(args, 1, "floor sprite")
            wall = _sprite(args, 2, "wall sprite")
            if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
                raise TypeMismatch("map grid must be a list of rows")
            cols = len(raw[0])
            for r, row in enumerate(raw):
                if len(row) != cols:
                    raise RaggedGrid(f"row {r} has {len(row)} cells, expected {cols}")
            grid = []
            for row in raw:
                out = []
                for v in row:
                    if (not isinstance(v, (int, float)) or isinstance(v, bool)
                            or float(v) not in (0.0, 1.0)):
                        raise UnknownTileId(f"tile id {v!r} is not 0 or 1")
                    out.append(int(v))
                grid.append(out)
            rows = len(grid)
            tileset = {0: TileDef(floor, True), 1: TileDef(wall, False)}
        else:
            raise ArityMismatch(
                f"create_map takes (sprite) or (grid, floor, wall), got {len(args)} args")
        sc.tilemap = Tilemap(cols=cols, rows=rows, tile_size=ts, grid=grid, tileset=tileset)
        host.map_installed()
        return None

    def bi_create_player(args):
        sc = scene()
        if sc.tilemap is None:
            raise NoScene("create_player needs a map; call create_map first")
        if sc.player() is not None:
            raise PlayerExists("a player already exists")
        name = _string(args, 0, "player name")
        sprite = _sprite(args, 1, "player sprite")
        x = _number(args, 2, "x")
        y = _number(args, 3, "y")
        eid = sc.spawn(EntitySpec(
            kind="player", x=x, y=y, w=float(sprite.w), h=float(sprite.h),
            health=config.DEFAULT_HEALTH, speed=config.DEFAULT_PLAYER_SPEED,
            sprite=sprite, name=name,
        ))
        ref = EntityRef(eid)
        interp.globals.define(name, ref)
        return ref

    def bi_add_trinket(args):
        sc = scene()
        if len(args) == 3:
            sprite = _sprite(args, 0, "trinket sprite")
            x = _number(args, 1, "x")
            y = _number(args, 2, "y")
            w, h = float(sprite.w), float(sprite.h)
            custom = {}
        elif len(args) == 5:
            w = _number(args, 0, "width")
            h = _number(args, 1, "height")
            color = _color(args, 2, "colour")
            x = _number(args, 3, "x")
            y = _number(args, 4, "y")
            sprite = None
            custom = {"color": color}
        else:
            raise ArityMismatch(
                f"add_trinket takes (sprite, x, y) or (w, h, colour, x, y), got {len(args)} args")
        if w <= 0 or h <= 0:
            raise BadDimensions("trinket size must be positive on both axes")
        eid = sc.spawn(EntitySpec(kind="trinket", x=x, y=y, w=w, h=h,
                                  sprite=sprite, custom=custom))
        return EntityRef(eid)

    def bi_spawn_enemy(args):
        sc = scene()
        if sc.tilemap is None:
            raise NoScene("spawn_enemy needs a map; call create_map first")
        if sc.player() is None:
            raise NoPlayer("spawn_enemy needs a player; call create_player first")
        sprite = _sprite(args, 0, "enemy sprite")
        x = _number(args, 1, "x")
        y = _number(args, 2, "y")
        eid = sc.spawn(EntitySpec(
            kind="enemy", x=x, y=y, w=float(sprite.w), h=float(sprite.h),
            health=config.DEFAULT_HEALTH, speed=config.DEFAULT_ENEMY_SPEED,
            sprite=sprite,
            custom={
                behaviors.FIRE_INTERVAL_KEY: float(config.ENEMY_FIRE_INTERVAL),
                behaviors.FIRE_RANGE_KEY: config.ENEMY_FIRE_RANGE,
                behaviors.PROJECTILE_SPEED_KEY: config.PROJECTILE_SPEED,
                behaviors.PROJECTILE_DAMAGE_KEY: config.PROJECTILE_DAMAGE,
            },
        ))
        return EntityRef(eid)

    def bi_callback_prob(args):
        sc = scene()
        fn = args[0]
        p = _number(args, 1, "probability")
        if not isinstance(fn, (Function, Builtin)):
            raise TypeMismatch(f"callback must be a function, got {type_name(fn)}")
        if isinstance(fn, Function) and len(fn.params) != 0:
            raise ArityMismatch(
                f"callback must take zero arguments, got {len(fn.params)}")
        if not (0.0 <= p <= 1.0):
            raise BadProbability(f"probability must be within [0, 1], got {p:g}")
        sc.callbacks.append(Callback(fn, p))
        return None

    def bi_refresh_scene(args):
        refresh_scene_state(scene())
        return None

    # ------------------------------------------------------------------
    # utilities
    # ------------------------------------------------------------------
    def bi_scene_list(args):
        return [EntityRef(eid) for eid in sorted(scene().entities)]

    def bi_despawn(args):
        ref = _entity(args, 0, "despawn target")
        deref(ref)
        scene().despawn(ref.id)
        return None

    def bi_distance(args):
        a = deref(_entity(args, 0, "first entity"))
        b = deref(_entity(args, 1, "second entity"))
        ax, ay = a.center()
        bx, by = b.center()
        return math.hypot(bx - ax, by - ay)

    def bi_spawn_projectile(args):
        owner = deref(_entity(args, 0, "owner"))
        dx = _number(args, 1, "dx")
        dy = _number(args, 2, "dy")
        speed = behaviors._custom_number(owner, behaviors.PROJECTILE_SPEED_KEY,
                                         config.PROJECTILE_SPEED)
        damage = behaviors._custom_number(owner, behaviors.PROJECTILE_DAMAGE_KEY,
                                          config.PROJECTILE_DAMAGE)
        eid = behaviors.spawn_projectile(scene(), owner, dx, dy,
                                         speed=speed, damage=damage)
        return EntityRef(eid) if eid is not None else None

    def bi_rand(args):
        return scene().rng.uniform()

    def bi_print(args):
        host.emit(Print(display_text(args[0])))
        return None

    def bi_hide(args):
        if interp.stack:
            host.hide_cell(interp.stack[0].cell_id)
        return None

    def bi_load_sheet(args):
        name = _string(args, 0, "sheet name")
        path = _string(args, 1, "sheet path")
        tile_w = int(_number(args, 2, "tile width"))
        tile_h = int(_number(args, 3, "tile height"))
        host.assets.load_sheet(name, path, tile_w, tile_h, base_dir=host.base_dir)
        return name

    def bi_sheet_sprite(args):
        name = _string(args, 0, "sheet name")
        index = _number(args, 1, "sprite index")
        if index != int(index):
            raise TypeMismatch("sprite index must be a whole number")
        return slice_sheet(host.assets.get(name), int(index))

    def bi_len(args):
        v = args[0]
        if isinstance(v, (list, str)):
            return float(len(v))
        raise TypeMismatch(f"len() needs a list or string, got {type_name(v)}")

    register("start_game", bi_start_game, 3)
    register("create_map", bi_create_map, None)
    register("create_player", bi_create_player, 4)
    register("add_trinket", bi_add_trinket, None)
    register("spawn_enemy", bi_spawn_enemy, 3)
    register("callback_prob", bi_callback_prob, 2)
    register("refresh_scene", bi_refresh_scene, 0)
    register("scene_list", bi_scene_list, 0)
    register("despawn", bi_despawn, 1)
    register("distance", bi_distance, 2)
    register("spawn_projectile", bi_spawn_projectile, 3)
    register("rand", bi_rand, 0)
    register("print", bi_print, 1)
    register("hide", bi_hide, 0)
    register("load_sheet", bi_load_sheet, 4)
    register("sheet_sprite", bi_sheet_sprite, 2)
    register("len", bi_len, 1)
    register("abs", lambda args: abs(_number(args, 0, "abs() argument")), 1)
    register("floor", lambda args: float(math.floor(_number(args, 0, "floor() argument"))), 1)
    register("min", lambda args: min(_number(args, 0, "min() a"), _number(args, 1, "min() b")), 2)
    register("max", lambda args: max(_number(args, 0, "max() a"), _number(args, 1, "max() b")), 2)
