// Client-side cell list: mirrors the server notebook's order, tracks
// per-cell results, edits (dirty) and hidden/collapsed state.

import type { CellError } from "./protocol.js";

export interface NotebookCellJson {
  id: string;
  kind: "code" | "doc";
  hidden: boolean;
  source: string;
}

export interface NotebookJson {
  version: number;
  seed: number;
  cells: NotebookCellJson[];
  assets: unknown[];
}

export type CellResultState =
  | { state: "idle" }
  | { state: "running" }
  | { state: "ok"; valueRepr?: string }
  | { state: "error"; error: CellError };

export interface ClientCell {
  id: string;
  kind: "code" | "doc";
  source: string;
  hidden: boolean;
  collapsed: boolean;
  dirty: boolean;
  result: CellResultState;
}

export class CellStore {
  cells: ClientCell[] = [];
  private counter = 0;

  loadNotebook(nb: NotebookJson): void {
    this.cells = nb.cells.map((c) => ({
      id: c.id,
      kind: c.kind,
      source: c.source,
      hidden: c.hidden,
      collapsed: c.hidden, // hidden cells start folded but can expand
      dirty: false,
      result: { state: "idle" },
    }));
  }

  get(id: string): ClientCell | undefined {
    return this.cells.find((c) => c.id === id);
  }

  edit(id: string, source: string): void {
    const cell = this.get(id);
    if (!cell) return;
    if (cell.source !== source) {
      cell.source = source;
      cell.dirty = true;
    }
  }

  markRunning(id: string): void {
    const cell = this.get(id);
    if (cell) cell.result = { state: "running" };
  }

  applyResult(id: string, ok: boolean, valueRepr?: string, error?: CellError): void {
    const cell = this.get(id);
    if (!cell) return;
    cell.result = ok
      ? { state: "ok", valueRepr }
      : { state: "error", error: error ?? { message: "unknown error", trace: [] } };
    cell.dirty = false; // the server now holds this source
  }

  addCell(): ClientCell {
    let id = "";
    do {
      this.counter += 1;
      id = `cell-${this.counter}`;
    } while (this.get(id));
    const cell: ClientCell = {
      id,
      kind: "code",
      source: "",
      hidden: false,
      collapsed: false,
      dirty: true,
      result: { state: "idle" },
    };
    this.cells.push(cell);
    return cell;
  }

  toggleCollapsed(id: string): void {
    const cell = this.get(id);
    if (cell) cell.collapsed = !cell.collapsed;
  }

  /** Cells the UI would run for "run all" (docs never execute). */
  runnable(): ClientCell[] {
    return this.cells.filter((c) => c.kind === "code");
  }
}

/** Error panel text: innermost frame first, clickable per frame. */
export function formatTrace(error: CellError): string[] {
  const lines = [error.message];
  for (const frame of error.trace) {
    lines.push(`  at ${frame.fn} (${frame.cell_id}:${frame.line}:${frame.col})`);
  }
  return lines;
}
