"""Session service: exposes a live trial to operators over HTTP + websocket.

One trial runs per session, in a background thread that owns all learning
state. Websocket handlers talk to it only through a bounded feedback queue
(inbound) and per-client frame buffers (outbound), so a slow client can
never stall the learner. REST endpoints cover health, session control, and
desk-scale batch experiments.
"""
import asyncio
import dataclasses
import logging
import threading
import uuid
from collections import deque
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ValidationError

from .config import ExperimentConfig
from .emg import LiveEmgSource
from .experiment import (aggregate, run_experiment, trace_path,
                         write_trial_jsonl)
from .rewards import QueueFeedbackSource, RewardMode
from .trial import TrialControl, run_trial
from .wire import (ControlMsg, EmgSampleMsg, ErrorMsg, FeedbackAckMsg,
                   FeedbackMsg, RewardComponents, SessionState,
                   SessionStatusMsg, TelemetryFrame, parse_inbound)

logger = logging.getLogger(__name__)

CLIENT_BUFFER_FRAMES = 2048


class SessionService:
    """Owns the single live session and the client fan-out buffers."""

    def __init__(self, default_config: ExperimentConfig):
        self.default_config = default_config
        self._lock = threading.Lock()
        self._clients = {}
        self._next_client = 0
        self.session_id = ""
        self.phase = "idle"
        self.step = -1
        self.config = default_config
        self._thread: Optional[threading.Thread] = None
        self._control: Optional[TrialControl] = None
        self._feedback: Optional[QueueFeedbackSource] = None
        self._live_emg: Optional[LiveEmgSource] = None
        self.last_result = None

    # -- client fan-out -------------------------------------------------

    def register_client(self):
        with self._lock:
            self._next_client += 1
            buffer = deque(maxlen=CLIENT_BUFFER_FRAMES)
            self._clients[self._next_client] = buffer
            buffer.append(self._status_msg().model_dump_json())
            return self._next_client, buffer

    def unregister_client(self, client_id):
        with self._lock:
            self._clients.pop(client_id, None)

    def _broadcast(self, payload: str):
        for buffer in list(self._clients.values()):
            buffer.append(payload)

    def _status_msg(self) -> SessionStatusMsg:
        return SessionStatusMsg(session_id=self.session_id, phase=self.phase,
                                step=self.step, clients=len(self._clients))

    def _set_phase(self, phase: str):
        self.phase = phase
        self._broadcast(self._status_msg().model_dump_json())

    # -- session lifecycle ----------------------------------------------

    def state(self) -> SessionState:
        return SessionState(session_id=self.session_id, phase=self.phase,
                            step=self.step, clients=len(self._clients),
                            mode=self.config.mode.value,
                            max_steps=self.config.max_steps)

    def start(self, overrides: Optional[dict] = None):
        with self._lock:
            if self.phase in ("running", "paused"):
                raise SessionError("already_running", "a trial is already in progress")
            cfg = self.default_config
            if overrides:
                merged = cfg.to_dict()
                merged.update(overrides)
                cfg = ExperimentConfig.from_dict(merged)
            self.config = cfg
            self.session_id = uuid.uuid4().hex[:12]
            self.step = -1
            self._control = TrialControl()
            self._feedback = QueueFeedbackSource()
            self._live_emg = LiveEmgSource() if cfg.emg_source == "live" else None
            self._thread = threading.Thread(target=self._run, daemon=True,
                                            name=f"trial-{self.session_id}")
            self._set_phase("running")
            self._thread.start()

    def pause(self):
        with self._lock:
            if self.phase != "running":
                raise SessionError("not_running", f"cannot pause in phase {self.phase}")
            self._control.pause()
            self._set_phase("paused")

    def resume(self):
        with self._lock:
            if self.phase != "paused":
                raise SessionError("not_paused", f"cannot resume in phase {self.phase}")
            self._control.resume()
            self._set_phase("running")

    def stop(self):
        with self._lock:
            if self.phase not in ("running", "paused"):
                raise SessionError("not_running", f"cannot stop in phase {self.phase}")
            self._control.resume()
            self._control.stop()
        self._thread.join(timeout=10.0)

    def _run(self):
        cfg = self.config
        try:
            result = run_trial(cfg, cfg.seeds[0], emg_source=self._live_emg,
                               feedback_source=self._feedback,
                               on_step=self._on_step, control=self._control)
            self.last_result = result
            try:
                path = trace_path(cfg.output_dir, cfg.mode, cfg.seeds[0])
                write_trial_jsonl(path, result)
                logger.info("session %s: wrote %d steps to %s",
                            self.session_id, len(result.steps), path)
            except OSError as exc:
                logger.error("session %s: could not write trace: %s", self.session_id, exc)
            with self._lock:
                self._set_phase("faulted" if result.fault else "finished")
        except Exception:
            logger.exception("session %s: trial crashed", self.session_id)
            with self._lock:
                self._set_phase("faulted")

    def _on_step(self, record, learner):
        self.step = record.t
        if record.t % self.config.telemetry_every == 0:
            frame = TelemetryFrame(
                t=record.t, theta=record.theta, theta_t=record.theta_t,
                mu=record.mu, sigma=record.sigma, a_exec=record.a_exec,
                r=record.r,
                r_components=RewardComponents(env=record.r_env, human=record.r_human),
                cumulative_reward=record.cumulative_reward, s_emg=record.s_emg)
            self._broadcast(frame.model_dump_json())
        for value in record.feedback:
            self._broadcast(FeedbackAckMsg(value=value, step=record.t).model_dump_json())

    # -- inbound messages ------------------------------------------------

    def handle_text(self, text: str):
        """Route one inbound websocket message; returns an optional reply."""
        try:
            msg = parse_inbound(text)
        except ValidationError as exc:
            return ErrorMsg(code="bad_message", text=str(exc.errors()[0].get("msg", exc)))
        try:
            if isinstance(msg, FeedbackMsg):
                return self._handle_feedback(msg)
            if isinstance(msg, ControlMsg):
                return self._handle_control(msg)
            return self._handle_emg(msg)
        except SessionError as exc:
            return ErrorMsg(code=exc.code, text=exc.text)

    def _handle_feedback(self, msg: FeedbackMsg):
        if self.phase != "running":
            return ErrorMsg(code="not_running", text="feedback accepted only while running")
        self._feedback.push(msg.value, source="human")
        return None

    def _handle_control(self, msg: ControlMsg):
        if msg.command == "start":
            self.start(msg.config)
        elif msg.command == "pause":
            self.pause()
        elif msg.command == "resume":
            self.resume()
        else:
            self.stop()
        return None

    def _handle_emg(self, msg: EmgSampleMsg):
        if self._live_emg is None:
            return ErrorMsg(code="emg_not_live",
                            text="session is not configured with a live EMG source")
        self._live_emg.push(msg.s_raw)
        return None


class SessionError(Exception):
    def __init__(self, code: str, text: str):
        super().__init__(text)
        self.code = code
        self.text = text


class ExperimentRequest(BaseModel):
    """Batch run request: config field overrides plus the conditions to run."""
    config: dict = {}
    modes: Optional[list] = None


class TrialStats(BaseModel):
    seed: int
    mae_all: float
    mae_last10k: float
    mae_last5k: float
    fault: bool
    steps: int


class ConditionSummary(BaseModel):
    condition: str
    n: int
    n_faulted: int
    mae_all_mean: float
    mae_all_std: float
    mae_10k_mean: float
    mae_10k_std: float
    mae_5k_mean: float
    mae_5k_std: float
    trials: list


def create_app(default_config: Optional[ExperimentConfig] = None,
               static_dir=None) -> FastAPI:
    service = SessionService(default_config or ExperimentConfig())
    app = FastAPI(title="myocoach session service")
    app.state.service = service
    if static_dir and Path(static_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="cockpit")

    @app.get("/health", response_model=SessionState)
    def health():
        return service.state()

    @app.post("/session/{command}", response_model=SessionState)
    def session_command(command: str, overrides: Optional[dict] = None):
        try:
            if command == "start":
                service.start(overrides)
            elif command == "pause":
                service.pause()
            elif command == "resume":
                service.resume()
            elif command == "stop":
                service.stop()
            else:
                raise HTTPException(404, f"unknown session command {command!r}")
        except SessionError as exc:
            raise HTTPException(409, exc.text)
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        return service.state()

    @app.post("/experiments/run", response_model=list[ConditionSummary])
    def experiments_run(request: ExperimentRequest):
        merged = service.default_config.to_dict()
        merged.update(request.config)
        merged["pacing"] = "fast"
        try:
            cfg = ExperimentConfig.from_dict(merged)
            modes = [RewardMode(m) for m in (request.modes or [merged["mode"]])]
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        out = []
        for mode in modes:
            results = run_experiment(dataclasses.replace(cfg, mode=mode))
            summary = aggregate(results)
            out.append(ConditionSummary(
                condition=summary.condition, n=summary.n, n_faulted=summary.n_faulted,
                mae_all_mean=summary.mae_all_mean, mae_all_std=summary.mae_all_std,
                mae_10k_mean=summary.mae_10k_mean, mae_10k_std=summary.mae_10k_std,
                mae_5k_mean=summary.mae_5k_mean, mae_5k_std=summary.mae_5k_std,
                trials=[TrialStats(seed=r.seed, mae_all=r.mae_all,
                                   mae_last10k=r.mae_last10k, mae_last5k=r.mae_last5k,
                                   fault=r.fault, steps=len(r.steps)).model_dump()
                        for r in results]))
        return out

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        client_id, buffer = service.register_client()

        async def pump():
            while True:
                if buffer:
                    await ws.send_text(buffer.popleft())
                else:
                    await asyncio.sleep(0.002)

        sender = asyncio.create_task(pump())
        try:
            while True:
                text = await ws.receive_text()
                reply = service.handle_text(text)
                if reply is not None:
                    await ws.send_text(reply.model_dump_json())
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            service.unregister_client(client_id)

    return app
