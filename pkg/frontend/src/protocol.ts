// Wire protocol: JSON text frames, exactly the shapes the server speaks.

export type LogicalKey = "up" | "down" | "left" | "right" | "action";

export interface TraceFrame {
  fn: string;
  cell_id: string;
  line: number;
  col: number;
}

export interface CellError {
  message: string;
  trace: TraceFrame[];
}

export interface ResultMsg {
  type: "result";
  cell_id: string;
  ok: boolean;
  value_repr?: string;
  error?: CellError;
}

export interface SpriteRect {
  sheet: string;
  x: number;
  y: number;
  w: number;
  h: number;
  name: string | null;
}

export interface SnapshotEntity {
  id: number;
  kind: string;
  x: number;
  y: number;
  w: number;
  h: number;
  sprite: SpriteRect | null;
  health: number;
}

export interface SnapshotMsg {
  type: "snapshot";
  tick: number;
  entities: SnapshotEntity[];
}

export interface ManifestEntry {
  name: string;
  path: string;
  width: number;
  height: number;
  tile_w: number;
  tile_h: number;
}

export interface MapMsg {
  type: "map";
  cols: number;
  rows: number;
  tile_size: number;
  width: number;
  height: number;
  background: string;
  grid: number[][];
  tileset: Record<string, { sprite: SpriteRect | null; walkable: boolean }>;
  manifest: ManifestEntry[];
}

export interface QuarantineMsg {
  type: "quarantine";
  entity_id: number | null;
  tick: number;
  error: string;
  trace: TraceFrame[];
}

export interface PrintMsg {
  type: "print";
  text: string;
}

export type ServerMsg = ResultMsg | SnapshotMsg | MapMsg | QuarantineMsg | PrintMsg;

const SERVER_TYPES = new Set(["result", "snapshot", "map", "quarantine", "print"]);

/** Parse one frame; anything unrecognized comes back null, never a throw. */
export function parseServerMessage(text: string): ServerMsg | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof raw !== "object" || raw === null) return null;
  const msg = raw as { type?: unknown };
  if (typeof msg.type !== "string" || !SERVER_TYPES.has(msg.type)) return null;
  return raw as ServerMsg;
}

export function executeFrame(cellId: string, source?: string): string {
  const frame: Record<string, unknown> = { type: "execute", cell_id: cellId };
  if (source !== undefined) frame.source = source;
  return JSON.stringify(frame);
}

export function inputFrame(key: LogicalKey, state: "down" | "up"): string {
  return JSON.stringify({ type: "input", key, state });
}

export function controlFrame(
  action: "start" | "pause" | "step" | "refresh" | "set_seed",
  seed?: number,
): string {
  const frame: Record<string, unknown> = { type: "control", action };
  if (seed !== undefined) frame.seed = seed;
  return JSON.stringify(frame);
}
