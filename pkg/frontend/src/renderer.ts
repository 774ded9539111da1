// Thin canvas executor for planFrame()'s draw ops. Sheet images load
// over the server's /assets route; until one arrives its sprites draw
// as labeled rects.

import type { MapMsg } from "./protocol.js";
import { DrawOp, RenderState, planFrame } from "./renderState.js";

export class CanvasRenderer {
  private images = new Map<string, HTMLImageElement>();

  constructor(
    private canvas: HTMLCanvasElement,
    private state: RenderState,
  ) {}

  applyMap(map: MapMsg): void {
    this.state.setMap(map);
    this.canvas.width = map.width;
    this.canvas.height = map.height;
    for (const entry of map.manifest) {
      if (this.images.has(entry.name)) continue;
      const img = new Image();
      img.onload = () => this.state.markLoaded(entry.name);
      img.onerror = () => {
        if (this.state.warnOnceMissing(entry.name)) {
          console.warn(`asset '${entry.name}' failed to load (${entry.path})`);
        }
      };
      img.src = `/assets/${entry.path.replace(/^assets\//, "")}`;
      this.images.set(entry.name, img);
    }
  }

  /** Draw the newest pending snapshot, if any. rAF-driven. */
  drawPending(): void {
    const snapshot = this.state.takeFrame();
    if (!snapshot) return;
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.fillStyle = this.state.map?.background ?? "#000000";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    for (const op of planFrame(this.state, snapshot)) {
      this.drawOp(ctx, op);
    }
  }

  private drawOp(ctx: CanvasRenderingContext2D, op: DrawOp): void {
    if (op.op === "sprite") {
      const img = this.images.get(op.sheet);
      if (img && img.complete && img.naturalWidth > 0) {
        ctx.drawImage(img, op.sx, op.sy, op.sw, op.sh, op.dx, op.dy, op.dw, op.dh);
        return;
      }
      ctx.fillStyle = "#9e9e9e";
      ctx.fillRect(op.dx, op.dy, op.dw, op.dh);
      return;
    }
    ctx.fillStyle = op.color;
    ctx.fillRect(op.dx, op.dy, op.dw, op.dh);
    if (op.label && op.dw >= 24) {
      ctx.fillStyle = "#111111";
      ctx.font = "10px monospace";
      ctx.fillText(op.label, op.dx + 2, op.dy + 10, op.dw - 4);
    }
  }
}
