// What the canvas needs, kept separate from how it is drawn: the latest
// map, the latest snapshot (older frames are dropped, never queued),
// and which sheet images have finished loading. planFrame() turns that
// into an ordered list of draw ops that a dumb canvas loop executes.

import type { MapMsg, SnapshotMsg, SpriteRect } from "./protocol.js";

export interface SpriteOp {
  op: "sprite";
  sheet: string;
  sx: number;
  sy: number;
  sw: number;
  sh: number;
  dx: number;
  dy: number;
  dw: number;
  dh: number;
}

export interface RectOp {
  op: "rect";
  color: string;
  dx: number;
  dy: number;
  dw: number;
  dh: number;
  label?: string;
}

export type DrawOp = SpriteOp | RectOp;

export const KIND_COLORS: Record<string, string> = {
  player: "#4caf50",
  enemy: "#e53935",
  trinket: "#fbc02d",
  projectile: "#eeeeee",
};

const TILE_FALLBACK = ["#2e7d32", "#455a64"];

export class RenderState {
  map: MapMsg | null = null;
  snapshot: SnapshotMsg | null = null;
  droppedFrames = 0;
  private rendered = true;
  readonly loadedSheets = new Set<string>();
  private missingWarned = new Set<string>();

  setMap(map: MapMsg): void {
    this.map = map;
  }

  setSnapshot(snapshot: SnapshotMsg): void {
    if (!this.rendered) this.droppedFrames += 1;
    this.snapshot = snapshot;
    this.rendered = false;
  }

  /** The frame to draw now, or null when nothing new arrived. */
  takeFrame(): SnapshotMsg | null {
    if (this.rendered || this.snapshot === null) return null;
    this.rendered = true;
    return this.snapshot;
  }

  markLoaded(sheet: string): void {
    this.loadedSheets.add(sheet);
  }

  /** Sheets referenced by a sprite but never loaded get one console warning. */
  warnOnceMissing(sheet: string): boolean {
    if (this.missingWarned.has(sheet)) return false;
    this.missingWarned.add(sheet);
    return true;
  }
}

function spriteOrRect(
  state: RenderState,
  sprite: SpriteRect | null,
  fallback: RectOp,
): DrawOp {
  if (sprite && state.loadedSheets.has(sprite.sheet)) {
    return {
      op: "sprite",
      sheet: sprite.sheet,
      sx: sprite.x,
      sy: sprite.y,
      sw: sprite.w,
      sh: sprite.h,
      dx: fallback.dx,
      dy: fallback.dy,
      dw: fallback.dw,
      dh: fallback.dh,
    };
  }
  return fallback;
}

/** Tiles first (row-major), then entities by ascending id. */
export function planFrame(state: RenderState, snapshot: SnapshotMsg): DrawOp[] {
  const ops: DrawOp[] = [];
  const map = state.map;
  if (map) {
    for (let r = 0; r < map.rows; r++) {
      for (let c = 0; c < map.cols; c++) {
        const tileId = map.grid[r][c];
        const tile = map.tileset[String(tileId)];
        const fallback: RectOp = {
          op: "rect",
          color: TILE_FALLBACK[tileId % TILE_FALLBACK.length],
          dx: c * map.tile_size,
          dy: r * map.tile_size,
          dw: map.tile_size,
          dh: map.tile_size,
        };
        ops.push(spriteOrRect(state, tile ? tile.sprite : null, fallback));
      }
    }
  }
  const entities = [...snapshot.entities].sort((a, b) => a.id - b.id);
  for (const e of entities) {
    const fallback: RectOp = {
      op: "rect",
      color: KIND_COLORS[e.kind] ?? "#9e9e9e",
      dx: e.x,
      dy: e.y,
      dw: e.w,
      dh: e.h,
      label: e.kind,
    };
    ops.push(spriteOrRect(state, e.sprite, fallback));
  }
  return ops;
}
