"""WebSocket/HTTP edge for a live session.

All frames funnel into one ordered queue that the tick loop drains at
tick boundaries; the first client to connect is the driver (may
execute cells and send input), later ones observe. Assets are served
over HTTP from the notebook's directory so the browser can draw what
the headless engine only references.
"""

from __future__ import annotations

import asyncio
import contextlib
import json
import os

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, HTMLResponse, Response

from noteg import config
from noteg.session import Session

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>noteg</title></head>
<body><h1>noteg server</h1>
<p>The notebook UI is not built. Run <code>npm install && npm run build</code>
inside <code>frontend/</code>, or talk to <code>/ws</code> directly.</p>
</body></html>"""

_MUTATING_TYPES = ("execute", "input", "control")


class _Client:
    def __init__(self, ws: WebSocket, role: str):
        self.ws = ws
        self.role = role


def _frontend_dir() -> str | None:
    here = os.path.dirname(os.path.abspath(__file__))
    for candidate in (
        os.path.join(here, "..", "..", "frontend", "dist"),
        os.path.join(os.getcwd(), "frontend", "dist"),
    ):
        index = os.path.join(candidate, "index.html")
        if os.path.isfile(index):
            return os.path.abspath(candidate)
    return None


def create_app(session: Session, auto_tick: bool = False) -> FastAPI:
    clients: list[_Client] = []
    inbox: asyncio.Queue = asyncio.Queue()
    frontend = _frontend_dir()

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(tick_loop()) if auto_tick else None
        try:
            yield
        finally:
            if task:
                task.cancel()

    app = FastAPI(title="noteg", lifespan=lifespan)

    async def send(client: _Client, messages: list[dict]) -> None:
        for message in messages:
            try:
                await client.ws.send_text(json.dumps(message))
            except Exception:
                pass   # drops handled by the reader

    async def broadcast(messages: list[dict]) -> None:
        for client in list(clients):
            await send(client, messages)

    def scene_intro() -> list[dict]:
        intro: list[dict] = []
        if session.scene is not None and session.scene.tilemap is not None:
            intro.append(session.map_message())
        if session.scene is not None:
            intro.append(session.snapshot_message())
        return intro

    async def process(client: _Client, text: str) -> None:
        if client.role != "driver":
            try:
                msg_type = json.loads(text).get("type")
            except Exception:
                msg_type = None
            if msg_type in _MUTATING_TYPES:
                await send(client, [{"type": "print",
                                     "text": "[session] read-only observer"}])
                return
        replies = session.handle_frame(text)
        await broadcast(replies)

    @app.get("/", response_class=HTMLResponse)
    async def index():
        if frontend:
            return FileResponse(os.path.join(frontend, "index.html"))
        return HTMLResponse(_FALLBACK_PAGE)

    @app.get("/ui/{path:path}")
    async def ui_static(path: str):
        if not frontend:
            return Response(status_code=404)
        full = os.path.normpath(os.path.join(frontend, path))
        if not full.startswith(frontend) or not os.path.isfile(full):
            return Response(status_code=404)
        return FileResponse(full)

    @app.get("/notebook")
    async def notebook_json():
        return Response(content=session.save(), media_type="application/json")

    @app.get("/assets/{path:path}")
    async def asset(path: str):
        base = os.path.abspath(session.base_dir or os.getcwd())
        full = os.path.normpath(os.path.join(base, "assets", path))
        if not full.startswith(base) or not os.path.isfile(full):
            return Response(status_code=404)
        return FileResponse(full)

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        role = "driver" if not any(c.role == "driver" for c in clients) else "observer"
        client = _Client(websocket, role)
        clients.append(client)
        await send(client, [{"type": "print",
                             "text": f"[session] connected as {role}"}]
                   )
        await send(client, scene_intro())
        try:
            while True:
                text = await websocket.receive_text()
                if auto_tick:
                    await inbox.put((client, text))
                else:
                    await process(client, text)
        except WebSocketDisconnect:
            pass
        finally:
            if client in clients:
                clients.remove(client)
            if client.role == "driver" and clients:
                clients[0].role = "driver"
                await send(clients[0], [{"type": "print",
                                         "text": "[session] promoted to driver"}])

    async def tick_loop() -> None:
        # commands apply only here, between ticks; snapshots go out at
        # most every other tick (30/s against a 60/s clock)
        snapshot_gate = 0
        while True:
            await asyncio.sleep(config.TICK_DT)
            while not inbox.empty():
                client, text = inbox.get_nowait()
                await process(client, text)
            if session.scene is not None and session.running:
                messages = session.tick_once()
                snapshot_gate += 1
                if snapshot_gate % 2 == 0:
                    messages.append(session.snapshot_message())
                if messages:
                    await broadcast(messages)

    return app
