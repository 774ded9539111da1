// End-to-end against a real `noteg serve` process over a real socket:
// the live hot-swap loop, error traces, and the one-pair keyboard
// contract, using exactly the frames the UI modules emit.

import { ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { KeyTracker } from "../src/keymap.js";
import {
  controlFrame,
  executeFrame,
  inputFrame,
  parseServerMessage,
  ResultMsg,
  ServerMsg,
  SnapshotMsg,
} from "../src/protocol.js";

const PORT = 8773;
const BASE = `http://127.0.0.1:${PORT}`;
let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const response = await fetch(`${BASE}/notebook`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("server never came up");
}

class Client {
  ws!: WebSocket;
  inbox: ServerMsg[] = [];

  async connect(): Promise<void> {
    this.ws = new WebSocket(`ws://127.0.0.1:${PORT}/ws`);
    this.ws.on("message", (data) => {
      const msg = parseServerMessage(String(data));
      if (msg) this.inbox.push(msg);
    });
    await new Promise<void>((resolve, reject) => {
      this.ws.once("open", () => resolve());
      this.ws.once("error", reject);
    });
  }

  send(frame: string): void {
    this.ws.send(frame);
  }

  async next<T extends ServerMsg>(
    type: T["type"],
    predicate: (m: T) => boolean = () => true,
    timeoutMs = 8000,
  ): Promise<T> {
    const deadline = Date.now() + timeoutMs;
    let cursor = 0;
    while (Date.now() < deadline) {
      while (cursor < this.inbox.length) {
        const msg = this.inbox[cursor++];
        if (msg.type === type && predicate(msg as T)) return msg as T;
      }
      await new Promise((r) => setTimeout(r, 10));
    }
    throw new Error(`timed out waiting for ${type}`);
  }

  async exec(cellId: string, source: string): Promise<ResultMsg> {
    this.send(executeFrame(cellId, source));
    return this.next<ResultMsg>("result", (m) => m.cell_id === cellId);
  }

  close(): void {
    this.ws.close();
  }
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "noteg.cli", "serve",
     "--notebook", "../notebooks/tour.noteg.json",
     "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 30000);

afterAll(() => {
  server.kill();
});

describe("live server loop", () => {
  it("hot-swapping bullet speed changes motion within 2 snapshots", async () => {
    const client = new Client();
    await client.connect();
    try {
      // scene setup through the same cells a user would run
      for (const id of ["c1", "c2", "c3"]) {
        const result = await client.exec(id, await cellSource(id));
        expect(result.ok).toBe(true);
      }
      // a slow test bullet we keep a handle on
      const spawned = await client.exec(
        "bullet-cell",
        "b = spawn_projectile(hero, 1, 0)\nb.speed = 60\nb.pos = [96, 200]",
      );
      expect(spawned.ok).toBe(true);

      client.send(controlFrame("start"));
      const bullet = (s: SnapshotMsg) =>
        s.entities.find((e) => e.kind === "projectile");
      const s0 = await client.next<SnapshotMsg>("snapshot", (s) => !!bullet(s));
      const s1 = await client.next<SnapshotMsg>(
        "snapshot", (s) => s.tick > s0.tick && !!bullet(s));
      const slowRate =
        (bullet(s1)!.x - bullet(s0)!.x) / (s1.tick - s0.tick);

      // live retarget while the clock keeps running
      const swap = await client.exec("swap-cell", "b.speed = 240");
      expect(swap.ok).toBe(true);
      const s2 = await client.next<SnapshotMsg>(
        "snapshot", (s) => s.tick > s1.tick && !!bullet(s));
      const s3 = await client.next<SnapshotMsg>(
        "snapshot", (s) => s.tick > s2.tick && !!bullet(s));
      const fastRate =
        (bullet(s3)!.x - bullet(s2)!.x) / (s3.tick - s2.tick);

      expect(slowRate).toBeGreaterThan(0.5);
      expect(slowRate).toBeLessThan(2.5);
      expect(fastRate).toBeGreaterThan(slowRate * 2);
      client.send(controlFrame("pause"));
    } finally {
      client.close();
    }
  }, 30000);

  it("error cells come back with a populated trace", async () => {
    const client = new Client();
    await client.connect();
    try {
      const result = await client.exec(
        "err-cell",
        "broken = fn() { return nothing_here }\nbroken()",
      );
      expect(result.ok).toBe(false);
      expect(result.error?.message).toContain("unknown name");
      expect(result.error?.trace.length).toBeGreaterThanOrEqual(2);
      expect(result.error?.trace[0].fn).toBe("broken"); // innermost first
    } finally {
      client.close();
    }
  }, 20000);

  it("a held key, as the tracker filters it, moves then stops the player", async () => {
    const client = new Client();
    await client.connect();
    try {
      const keys = new KeyTracker();
      const frames: string[] = [];
      for (let i = 0; i < 30; i++) {
        const out = keys.keyDown("ArrowDown"); // auto-repeat storm
        if (out) frames.push(inputFrame(out.key, out.state));
      }
      const up = keys.keyUp("ArrowDown");
      if (up) frames.push(inputFrame(up.key, up.state));
      expect(frames).toHaveLength(2); // exactly one down/up pair

      const player = (s: SnapshotMsg) =>
        s.entities.find((e) => e.kind === "player");
      client.send(controlFrame("start"));
      const before = await client.next<SnapshotMsg>("snapshot", (s) => !!player(s));
      client.send(frames[0]);
      await new Promise((r) => setTimeout(r, 300));
      client.send(frames[1]);
      await new Promise((r) => setTimeout(r, 200));
      const stopped = await client.next<SnapshotMsg>(
        "snapshot", (s) => !!player(s) && s.tick > before.tick + 25);
      expect(player(stopped)!.y).toBeGreaterThan(player(before)!.y);
      // after the up frame the player holds still
      const later = await client.next<SnapshotMsg>(
        "snapshot", (s) => s.tick > stopped.tick + 5);
      expect(player(later)!.y).toBe(player(stopped)!.y);
      client.send(controlFrame("pause"));
    } finally {
      client.close();
    }
  }, 30000);
});

async function cellSource(id: string): Promise<string> {
  const response = await fetch(`${BASE}/notebook`);
  const nb = (await response.json()) as {
    cells: { id: string; source: string }[];
  };
  const cell = nb.cells.find((c) => c.id === id);
  if (!cell) throw new Error(`no cell ${id}`);
  return cell.source;
}
