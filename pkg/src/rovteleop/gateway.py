"""Long-running session gateway: WebSocket snapshot stream + input ingest.

One asyncio tick task owns the Session; client connections only talk to it
through queues. Snapshots go out as JSON text messages (one per WebSocket
message), inputs come in as JSON messages in the same schema the scripted
operators use. A slow client never stalls the loop: its queue keeps just
the newest snapshot and older ones are dropped.

Client protocol (all JSON objects):
  server -> client:
    {"type": "hello", "tick_hz": .., "scenario": .., "calibration": {..},
     "tank": {..}, "poles": [[x, y], ..], "pole_height_m": ..}
    {"type": "snapshot", ...StateSnapshot fields...}
    {"type": "error", "detail": "..."}
  client -> server:
    {"type": "subscribe", "rate_hz": 10}
    {"type": "glove_raw", "raw": 512}
    {"type": "controller", "joy_x": .., "joy_y": .., "finger_trigger": ..,
     "grip_trigger": ..}
    {"type": "hmd", "roll_deg": .., "pitch_deg": .., "yaw_deg": ..}
    {"type": "admin", "action": "reset" | "intervention_ack"}
"""

from __future__ import annotations

import asyncio
import contextlib
import json
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .eventlog import EventLogWriter
from .scenario import Scenario
from .session import InputError, Session, validate_message


class _Client:
    def __init__(self, tick_hz: float):
        self.queue: asyncio.Queue = asyncio.Queue(maxsize=1)
        self.every = 1
        self.tick_hz = tick_hz

    def set_rate(self, rate_hz: float) -> None:
        if rate_hz <= 0:
            raise InputError("rate_hz must be positive")
        self.every = max(1, round(self.tick_hz / rate_hz))

    def offer(self, snapshot_msg: str, tick: int) -> None:
        if tick % self.every:
            return
        if self.queue.full():  # newest wins; a slow client just skips frames
            with contextlib.suppress(asyncio.QueueEmpty):
                self.queue.get_nowait()
        self.queue.put_nowait(snapshot_msg)


class Gateway:
    """Owns the tick task and the client registry for one session."""

    def __init__(self, session: Session, realtime: bool = True):
        self.session = session
        self.realtime = realtime
        self.inputs: asyncio.Queue = asyncio.Queue()
        self.clients: set[_Client] = set()
        self._task: Optional[asyncio.Task] = None

    @property
    def tick_hz(self) -> float:
        return self.session.scenario.session.tick_hz

    def hello(self) -> dict:
        scn = self.session.scenario
        return {
            "type": "hello",
            "tick_hz": scn.session.tick_hz,
            "scenario": scn.name,
            "calibration": {
                "raw_open": scn.session.glove_raw_open,
                "raw_closed": scn.session.glove_raw_closed,
            },
            "tank": {
                "length_m": scn.tank.length_m,
                "width_m": scn.tank.width_m,
                "depth_m": scn.tank.depth_m,
            },
            "poles": [[x, y] for x, y in scn.pole_positions()],
            "pole_height_m": scn.poles.height_m,
        }

    async def submit(self, msg: dict) -> None:
        await self.inputs.put((msg, self.session.schedule.tick))

    def start(self) -> None:
        self._task = asyncio.create_task(self._tick_loop())

    async def stop(self) -> None:
        if self._task is not None:
            self._task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await self._task
        self.session.finalize_recording()

    async def _tick_loop(self) -> None:
        dt_s = 1.0 / self.tick_hz
        loop = asyncio.get_running_loop()
        next_deadline = loop.time() + dt_s
        while True:
            msgs: list[dict] = []
            earliest: Optional[int] = None
            while True:
                try:
                    msg, ingest_tick = self.inputs.get_nowait()
                except asyncio.QueueEmpty:
                    break
                msgs.append(msg)
                earliest = ingest_tick if earliest is None else min(earliest, ingest_tick)

            snapshot = self.session.step(msgs, ingest_tick=earliest)
            if self.clients:
                payload = json.dumps({"type": "snapshot", **snapshot.as_dict()})
                for client in self.clients:
                    client.offer(payload, snapshot.tick)

            if self.realtime:
                now = loop.time()
                delay = next_deadline - now
                next_deadline += dt_s
                if delay > 0:
                    await asyncio.sleep(delay)
                elif delay < -1.0:  # fell far behind; resynchronize
                    next_deadline = now + dt_s
            else:
                await asyncio.sleep(0)


def create_app(
    scenario: Scenario,
    seed: Optional[int] = None,
    realtime: bool = True,
    record_path: Optional[str] = None,
) -> FastAPI:
    record_stream = open(record_path, "w", encoding="utf-8") if record_path else None
    recorder = EventLogWriter(record_stream) if record_stream else None
    session = Session(scenario, seed=seed, recorder=recorder)
    gateway = Gateway(session, realtime=realtime)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        gateway.start()
        try:
            yield
        finally:
            await gateway.stop()
            if record_stream:
                record_stream.close()

    app = FastAPI(lifespan=lifespan)
    app.state.gateway = gateway

    @app.get("/health")
    async def health():
        return {
            "status": "ok",
            "tick": gateway.session.schedule.tick,
            "clients": len(gateway.clients),
        }

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        client = _Client(gateway.tick_hz)
        gateway.clients.add(client)
        await websocket.send_text(json.dumps(gateway.hello()))

        async def sender():
            while True:
                payload = await client.queue.get()
                await websocket.send_text(payload)

        send_task = asyncio.create_task(sender())
        try:
            while True:
                text = await websocket.receive_text()
                try:
                    msg = json.loads(text)
                except json.JSONDecodeError as err:
                    await websocket.send_text(
                        json.dumps({"type": "error", "detail": f"bad JSON: {err}"})
                    )
                    continue
                if isinstance(msg, dict) and msg.get("type") == "subscribe":
                    try:
                        client.set_rate(float(msg.get("rate_hz", gateway.tick_hz)))
                    except (TypeError, ValueError, InputError) as err:
                        await websocket.send_text(
                            json.dumps({"type": "error", "detail": str(err)})
                        )
                    continue
                try:
                    validate_message(msg)
                except InputError as err:
                    await websocket.send_text(
                        json.dumps({"type": "error", "detail": str(err)})
                    )
                    continue
                await gateway.submit(msg)
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await send_task
            gateway.clients.discard(client)

    return app


def serve(
    bind: str,
    scenario: Scenario,
    seed: Optional[int] = None,
    realtime: bool = True,
    record_path: Optional[str] = None,
) -> None:
    """Run the gateway under uvicorn until interrupted."""
    import uvicorn

    host, _, port = bind.rpartition(":")
    app = create_app(scenario, seed=seed, realtime=realtime, record_path=record_path)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
