"""Controller service: newline-delimited JSON over TCP plus a WebSocket bridge.

One simulation task owns the session; client commands funnel through a
single queue and execute between simulation steps, so no two commands
ever race.  Every connected client receives the telemetry broadcast and
the acks for commands it sent.  Slow subscribers drop the oldest frames
instead of stalling the simulation.

Recordings capture schedule runs: rows for the frames emitted while a
schedule is executing, timestamped relative to the moment the run
started.  That makes a recording a deterministic function of the config
and the submitted patterns, independent of when commands arrive.
"""

from __future__ import annotations

import asyncio
import contextlib
import dataclasses
import json

from .errors import (BusyError, ConfigError, DomainError,
                     ScheduleValidationError, StateError)
from .session import (DeviceSession, SessionState, frame_csv_header,
                      frame_csv_row, rebase_time)
from .waveforms import compose_pattern
from .wire import command_from_document

SUBSCRIBER_QUEUE_LIMIT = 256

_COMMAND_ERRORS = (StateError, BusyError, ConfigError, DomainError,
                   ScheduleValidationError)


class DeviceServer:
    """Serves one virtual device over TCP and (optionally) WebSocket."""

    def __init__(self, config, *, realtime: bool = True,
                 record_path: str | None = None):
        self.config = config
        self.session = DeviceSession(config)
        self.realtime = realtime
        self.record_path = record_path
        self._commands: asyncio.Queue = asyncio.Queue()
        self._subscribers: set[asyncio.Queue] = set()
        self._tcp_server = None
        self._ws_server = None
        self._sim_task = None
        self._record_fh = None
        self._run_t0 = 0.0

    # ------------------------------------------------------------------
    # lifecycle

    async def start(self, host: str = "127.0.0.1", port: int = 7745,
                    ws_port: int | None = None):
        """Bind listeners and launch the simulation loop."""
        self._tcp_server = await asyncio.start_server(self._handle_tcp,
                                                      host, port)
        if ws_port is not None:
            from websockets.asyncio.server import serve as ws_serve
            self._ws_server = await ws_serve(self._handle_ws, host, ws_port)
        if self.record_path:
            self._record_fh = open(self.record_path, "w", encoding="utf-8",
                                   newline="\n")
            self._record_fh.write(frame_csv_header(
                self.session.num_actuators, self.session.num_motors) + "\n")
        self._sim_task = asyncio.create_task(self._sim_loop())

    @property
    def tcp_port(self) -> int:
        return self._tcp_server.sockets[0].getsockname()[1]

    async def stop(self):
        """Stop the loop and close every subscriber."""
        if self._sim_task is not None:
            self._sim_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await self._sim_task
        if self._tcp_server is not None:
            self._tcp_server.close()
            await self._tcp_server.wait_closed()
        if self._ws_server is not None:
            self._ws_server.close()
            await self._ws_server.wait_closed()
        if self._record_fh is not None:
            self._record_fh.close()
            self._record_fh = None

    # ------------------------------------------------------------------
    # command execution (runs inside the simulation task)

    def _execute(self, obj: dict) -> dict:
        session = self.session
        name = obj.get("cmd") if isinstance(obj, dict) else None
        try:
            if name == "don1":
                session.don_step1()
            elif name == "don2":
                session.don_step2()
            elif name == "start":
                if session.state is SessionState.DONNING_STEP2:
                    session.settle()
                kind, cmd, squeeze, sample_period = command_from_document(
                    obj.get("pattern"), self.config.crank.alpha_half_range)
                schedule = compose_pattern(
                    kind, cmd, self.config.actuator, self.config.crank,
                    self.config.manifold, squeeze_time=squeeze,
                    sample_period=sample_period)
                session.start(schedule)
                self._run_t0 = session.t
            elif name == "stop":
                session.stop()
            elif name == "estop":
                session.estop()
            elif name == "reset":
                session.reset()
            else:
                raise ConfigError(f"unknown command {name!r}")
        except _COMMAND_ERRORS as exc:
            return {"v": 1, "ok": False, "cmd": name, "error": str(exc),
                    "state": session.state.value}
        return {"v": 1, "ok": True, "cmd": name, "state": session.state.value}

    async def _sim_loop(self):
        dt = self.session.params.sim_dt
        loop = asyncio.get_running_loop()
        next_wall = loop.time()
        yield_stride = max(1, round(0.005 / dt))
        ticks = 0
        while True:
            while True:
                try:
                    obj, reply_queue = self._commands.get_nowait()
                except asyncio.QueueEmpty:
                    break
                ack = self._execute(obj)
                if reply_queue is not None:
                    self._post(reply_queue, json.dumps(ack) + "\n")
            was_running = self.session.state is SessionState.RUNNING
            frame = self.session.tick()
            ticks += 1
            if frame is not None:
                self._broadcast(json.dumps(frame.to_json_obj()) + "\n")
                if self._record_fh is not None and was_running:
                    rebased = dataclasses.replace(frame, t=rebase_time(
                        frame.t, self._run_t0, self.session.params.sim_dt))
                    self._record_fh.write(frame_csv_row(rebased) + "\n")
                    self._record_fh.flush()
            if self.realtime:
                next_wall += dt
                delay = next_wall - loop.time()
                if delay > 0.0:
                    await asyncio.sleep(delay)
                elif delay < -0.25:
                    next_wall = loop.time()  # fell badly behind; resync
            elif ticks % yield_stride == 0:
                await asyncio.sleep(0)

    # ------------------------------------------------------------------
    # subscribers

    def _subscribe(self) -> asyncio.Queue:
        queue: asyncio.Queue = asyncio.Queue(maxsize=SUBSCRIBER_QUEUE_LIMIT)
        self._subscribers.add(queue)
        return queue

    def _unsubscribe(self, queue: asyncio.Queue):
        self._subscribers.discard(queue)

    def _broadcast(self, text: str):
        for queue in self._subscribers:
            self._post(queue, text)

    @staticmethod
    def _post(queue: asyncio.Queue, text: str):
        if queue.full():
            with contextlib.suppress(asyncio.QueueEmpty):
                queue.get_nowait()
        queue.put_nowait(text)

    def _enqueue(self, raw: str, reply_queue: asyncio.Queue):
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            self._post(reply_queue, json.dumps(
                {"v": 1, "ok": False, "error": f"invalid json: {exc}",
                 "state": self.session.state.value}) + "\n")
            return
        self._commands.put_nowait((obj, reply_queue))

    # ------------------------------------------------------------------
    # transports

    async def _handle_tcp(self, reader: asyncio.StreamReader,
                          writer: asyncio.StreamWriter):
        queue = self._subscribe()

        async def sender():
            while True:
                text = await queue.get()
                writer.write(text.encode("utf-8"))
                await writer.drain()

        task = asyncio.create_task(sender())
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                if line.strip():
                    self._enqueue(line.decode("utf-8"), queue)
        except (ConnectionResetError, asyncio.IncompleteReadError):
            pass
        finally:
            task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await task
            self._unsubscribe(queue)
            writer.close()
            with contextlib.suppress(OSError):
                await writer.wait_closed()

    async def _handle_ws(self, websocket):
        queue = self._subscribe()

        async def sender():
            while True:
                await websocket.send(await queue.get())

        task = asyncio.create_task(sender())
        try:
            async for message in websocket:
                if isinstance(message, bytes):
                    message = message.decode("utf-8")
                if message.strip():
                    self._enqueue(message, queue)
        finally:
            task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await task
            self._unsubscribe(queue)


def run_server(config, host: str = "127.0.0.1", port: int = 7745,
               ws_port: int | None = None, *, realtime: bool = True,
               record_path: str | None = None):
    """Blocking entry point; returns on KeyboardInterrupt."""

    async def _main():
        server = DeviceServer(config, realtime=realtime,
                              record_path=record_path)
        await server.start(host=host, port=port, ws_port=ws_port)
        try:
            await asyncio.Event().wait()
        finally:
            await server.stop()

    try:
        asyncio.run(_main())
    except KeyboardInterrupt:
        pass
