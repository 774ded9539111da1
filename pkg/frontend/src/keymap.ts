// Physical keys -> logical game keys, with key-repeat suppression.
// A logical key is "down" while any physical key mapped to it is held,
// so holding A and ArrowLeft together emits one down and one up.

import type { LogicalKey } from "./protocol.js";

const PHYSICAL_TO_LOGICAL: Record<string, LogicalKey> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
  KeyW: "up",
  KeyS: "down",
  KeyA: "left",
  KeyD: "right",
  Space: "action",
  Enter: "action",
};

export interface KeyEventOut {
  key: LogicalKey;
  state: "down" | "up";
}

export class KeyTracker {
  private held = new Map<LogicalKey, Set<string>>();

  /** Returns the message to send, or null (unmapped key or auto-repeat). */
  keyDown(code: string): KeyEventOut | null {
    const logical = PHYSICAL_TO_LOGICAL[code];
    if (!logical) return null;
    let holders = this.held.get(logical);
    if (!holders) {
      holders = new Set();
      this.held.set(logical, holders);
    }
    if (holders.has(code)) return null; // auto-repeat
    const wasUp = holders.size === 0;
    holders.add(code);
    return wasUp ? { key: logical, state: "down" } : null;
  }

  keyUp(code: string): KeyEventOut | null {
    const logical = PHYSICAL_TO_LOGICAL[code];
    if (!logical) return null;
    const holders = this.held.get(logical);
    if (!holders || !holders.has(code)) return null;
    holders.delete(code);
    return holders.size === 0 ? { key: logical, state: "up" } : null;
  }

  /** Focus loss: release everything that is still down. */
  releaseAll(): KeyEventOut[] {
    const out: KeyEventOut[] = [];
    for (const [logical, holders] of this.held) {
      if (holders.size > 0) {
        holders.clear();
        out.push({ key: logical, state: "up" });
      }
    }
    return out;
  }
}
