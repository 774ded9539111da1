// Single-page notebook client: cell editors on the left, live canvas on
// the right. All game mutation goes through protocol frames; this file
// only wires DOM events to frames and frames to DOM updates.

import { CellStore, formatTrace, NotebookJson } from "./cells.js";
import { KeyTracker } from "./keymap.js";
import {
  controlFrame,
  executeFrame,
  inputFrame,
  parseServerMessage,
  ServerMsg,
} from "./protocol.js";
import { CanvasRenderer } from "./renderer.js";
import { RenderState } from "./renderState.js";

const cellStore = new CellStore();
const renderState = new RenderState();
const keys = new KeyTracker();

let socket: WebSocket | null = null;
let connected = false;

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

function send(frame: string): void {
  if (socket && connected) socket.send(frame);
}

// ----------------------------------------------------------------------
// console panel
// ----------------------------------------------------------------------
function logLine(text: string, cls = ""): void {
  const panel = $("console");
  const line = document.createElement("div");
  line.textContent = text;
  if (cls) line.className = cls;
  panel.appendChild(line);
  while (panel.childElementCount > 200) panel.removeChild(panel.firstChild!);
  panel.scrollTop = panel.scrollHeight;
}

// ----------------------------------------------------------------------
// cell list
// ----------------------------------------------------------------------
function renderCells(): void {
  const list = $("cells");
  list.innerHTML = "";
  for (const cell of cellStore.cells) {
    const box = document.createElement("div");
    box.className = `cell ${cell.kind}${cell.hidden ? " hidden-cell" : ""}`;

    const header = document.createElement("div");
    header.className = "cell-header";
    const title = document.createElement("span");
    title.textContent = `${cell.id}${cell.kind === "doc" ? " (doc)" : ""}` +
      `${cell.dirty ? " *" : ""}${cell.hidden ? " [hidden]" : ""}`;
    header.appendChild(title);

    const toggle = document.createElement("button");
    toggle.textContent = cell.collapsed ? "expand" : "fold";
    toggle.onclick = () => {
      cellStore.toggleCollapsed(cell.id);
      renderCells();
    };
    header.appendChild(toggle);
    if (cell.kind === "code") {
      const run = document.createElement("button");
      run.textContent = "run";
      run.className = "run-btn";
      run.disabled = !connected;
      run.onclick = () => runCell(cell.id);
      header.appendChild(run);
    }
    box.appendChild(header);

    if (!cell.collapsed) {
      const editor = document.createElement("textarea");
      editor.value = cell.source;
      editor.rows = Math.min(14, Math.max(2, cell.source.split("\n").length));
      editor.spellcheck = false;
      if (cell.kind === "doc") editor.classList.add("doc-text");
      editor.oninput = () => cellStore.edit(cell.id, editor.value);
      editor.onkeydown = (ev) => {
        if (ev.key === "Enter" && ev.shiftKey) {
          ev.preventDefault();
          runCell(cell.id);
        }
      };
      box.appendChild(editor);
    }

    const out = document.createElement("div");
    out.className = "cell-output";
    out.dataset.cell = cell.id;
    renderResult(out, cell.id);
    box.appendChild(out);
    list.appendChild(box);
  }
}

function renderResult(out: HTMLElement, cellId: string): void {
  const cell = cellStore.get(cellId);
  if (!cell) return;
  out.innerHTML = "";
  const r = cell.result;
  if (r.state === "running") {
    out.textContent = "...";
  } else if (r.state === "ok" && r.valueRepr !== undefined) {
    const value = document.createElement("pre");
    value.className = "value";
    value.textContent = r.valueRepr;
    out.appendChild(value);
  } else if (r.state === "error") {
    const panel = document.createElement("pre");
    panel.className = "trace";
    panel.textContent = formatTrace(r.error).join("\n");
    out.appendChild(panel);
  }
}

function refreshResult(cellId: string): void {
  const out = document.querySelector<HTMLElement>(
    `.cell-output[data-cell="${cellId}"]`,
  );
  if (out) renderResult(out, cellId);
}

function runCell(cellId: string): void {
  const cell = cellStore.get(cellId);
  if (!cell || cell.kind !== "code") return;
  cellStore.markRunning(cellId);
  refreshResult(cellId);
  send(executeFrame(cellId, cell.source));
}

// ----------------------------------------------------------------------
// server messages
// ----------------------------------------------------------------------
let renderer: CanvasRenderer;

function onMessage(msg: ServerMsg): void {
  switch (msg.type) {
    case "result": {
      if (!cellStore.get(msg.cell_id)) {
        // cell created server-side (e.g. run-all on an added cell)
        cellStore.addCell();
      }
      cellStore.applyResult(msg.cell_id, msg.ok, msg.value_repr, msg.error);
      refreshResult(msg.cell_id);
      renderCells();
      if (!msg.ok && msg.error) {
        logLine(`error in ${msg.cell_id}: ${msg.error.message}`, "err");
      }
      break;
    }
    case "map":
      renderer.applyMap(msg);
      break;
    case "snapshot":
      renderState.setSnapshot(msg);
      $("tick").textContent = `tick ${msg.tick}`;
      break;
    case "print":
      logLine(msg.text);
      break;
    case "quarantine": {
      const who = msg.entity_id === null ? "callback" : `entity ${msg.entity_id}`;
      logLine(`quarantined ${who} @ tick ${msg.tick}: ${msg.error}`, "err");
      for (const frame of msg.trace) {
        logLine(`  at ${frame.fn} (${frame.cell_id}:${frame.line}:${frame.col})`, "err");
      }
      break;
    }
  }
}

// ----------------------------------------------------------------------
// connection
// ----------------------------------------------------------------------
function setConnected(up: boolean): void {
  connected = up;
  $("banner").style.display = up ? "none" : "block";
  document
    .querySelectorAll<HTMLButtonElement>(".run-btn, .ctl")
    .forEach((b) => (b.disabled = !up));
}

function connect(): void {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  socket = new WebSocket(`${proto}://${location.host}/ws`);
  socket.onopen = () => setConnected(true);
  socket.onclose = () => {
    setConnected(false);
    setTimeout(connect, 1500);
  };
  socket.onmessage = (ev) => {
    const msg = parseServerMessage(String(ev.data));
    if (msg) onMessage(msg);
  };
}

async function loadNotebook(): Promise<void> {
  const response = await fetch("/notebook");
  const nb = (await response.json()) as NotebookJson;
  cellStore.loadNotebook(nb);
  renderCells();
}

// ----------------------------------------------------------------------
// boot
// ----------------------------------------------------------------------
window.addEventListener("DOMContentLoaded", () => {
  const canvas = $("game") as unknown as HTMLCanvasElement;
  renderer = new CanvasRenderer(canvas, renderState);

  canvas.addEventListener("keydown", (ev) => {
    const out = keys.keyDown(ev.code);
    if (out) {
      ev.preventDefault();
      send(inputFrame(out.key, out.state));
    } else if (ev.code in { ArrowUp: 1, ArrowDown: 1, ArrowLeft: 1, ArrowRight: 1 }) {
      ev.preventDefault(); // swallow auto-repeat scrolling too
    }
  });
  canvas.addEventListener("keyup", (ev) => {
    const out = keys.keyUp(ev.code);
    if (out) send(inputFrame(out.key, out.state));
  });
  canvas.addEventListener("blur", () => {
    for (const out of keys.releaseAll()) send(inputFrame(out.key, out.state));
  });

  $("btn-start").onclick = () => send(controlFrame("start"));
  $("btn-pause").onclick = () => send(controlFrame("pause"));
  $("btn-step").onclick = () => send(controlFrame("step"));
  $("btn-refresh").onclick = () => send(controlFrame("refresh"));
  $("btn-run-all").onclick = () => {
    for (const cell of cellStore.runnable()) runCell(cell.id);
  };
  $("btn-add").onclick = () => {
    cellStore.addCell();
    renderCells();
  };
  $("btn-save").onclick = () => {
    // the server's canonical bytes, untouched by the client
    const a = document.createElement("a");
    a.href = "/notebook";
    a.download = "notebook.noteg.json";
    a.click();
  };

  const frame = () => {
    renderer.drawPending();
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);

  void loadNotebook();
  connect();
});
