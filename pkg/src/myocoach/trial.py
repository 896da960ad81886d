"""The per-step training loop and its metrics.

Each step: read and smooth the raw control signal, encode the state, sample
an action, move the joint, advance the target, drain any pending feedback,
compute the reward, and update the learner. Everything is deterministic
given (config, seed, scripted sources); independent RNG streams are spawned
from the seed for action sampling, EMG noise, and the feedback oracle.
"""
import logging
import math
import threading
import time
from dataclasses import dataclass

import numpy as np

from .config import ExperimentConfig
from .emg import EmgState, SourceExhausted, smooth_emg
from .learner import ActorCriticLearner, NumericFault
from .plant import PlantState, apply_action, normalize_state, target_angle
from .rewards import RewardMode, environment_reward, human_trace_step, total_reward
from .tilecoding import build_tilecoder

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepRecord:
    t: int
    theta: float
    theta_t: float
    a_exec: float
    mu: float
    sigma: float
    r: float
    r_env: float
    r_human: float
    cumulative_reward: float
    s_emg: float
    num_active: int
    feedback: tuple = ()


@dataclass
class TrialResult:
    steps: list
    mae_all: float
    mae_last10k: float
    mae_last5k: float
    fault: bool = False
    fault_message: str = None
    exhausted: bool = False
    seed: int = None
    mode: RewardMode = None

    @classmethod
    def from_steps(cls, steps, **meta) -> "TrialResult":
        if steps:
            errors = [abs(rec.theta - rec.theta_t) for rec in steps]
            maes = (_mean(errors), _mean(errors[-10000:]), _mean(errors[-5000:]))
        else:
            maes = (math.nan,) * 3
        return cls(steps, *maes, **meta)


def _mean(values):
    return sum(values) / len(values)


def mae(angle_trace, target_trace, window="all") -> float:
    """Mean absolute angular error over the whole trace or its last k steps."""
    if len(angle_trace) != len(target_trace):
        raise ValueError("angle and target traces differ in length")
    if not len(angle_trace):
        raise ValueError("cannot compute MAE of an empty trace")
    if window == "all":
        k = len(angle_trace)
    else:
        k = int(window)
        if k < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        if k > len(angle_trace):
            logger.warning("window %d exceeds trace length %d, using all steps",
                           k, len(angle_trace))
            k = len(angle_trace)
    return _mean([abs(a - b) for a, b in zip(angle_trace[-k:], target_trace[-k:])])


def fraction_within(steps, threshold, window=None) -> float:
    """Share of (optionally the last `window`) steps tracking inside the threshold."""
    recs = steps if window is None else steps[-window:]
    if not recs:
        raise ValueError("no steps to evaluate")
    hits = sum(1 for rec in recs if abs(rec.theta - rec.theta_t) <= threshold)
    return hits / len(recs)


class TrialControl:
    """Pause/stop flags shared between the trial loop and a controlling thread."""

    def __init__(self):
        self._stop = threading.Event()
        self._paused = threading.Event()

    def stop(self):
        self._stop.set()

    def pause(self):
        self._paused.set()

    def resume(self):
        self._paused.clear()

    @property
    def stopping(self) -> bool:
        return self._stop.is_set()

    @property
    def paused(self) -> bool:
        return self._paused.is_set()

    def wait_while_paused(self):
        while self._paused.is_set() and not self._stop.is_set():
            time.sleep(0.005)


def run_trial(cfg: ExperimentConfig, seed: int, emg_source=None,
              feedback_source=None, on_step=None, control=None) -> TrialResult:
    """Run one trial of cfg.max_steps learning steps.

    Sources default to the ones named in the config; pass explicit objects to
    inject live or scripted ones. `on_step(record, learner)` fires after every
    completed step. A numeric fault ends the trial with the partial trace and
    the fault flag set; an exhausted replay source ends it cleanly.
    """
    streams = np.random.SeedSequence(seed).spawn(4)
    action_rng = np.random.default_rng(streams[0])
    if emg_source is None:
        emg_source = cfg.make_emg_source(np.random.default_rng(streams[1]))
    if feedback_source is None:
        feedback_source = cfg.make_feedback_source(np.random.default_rng(streams[2]))
    jitter_std = cfg.joint.actuation_noise_std
    jitter_rng = np.random.default_rng(streams[3]) if jitter_std > 0 else None

    coder = build_tilecoder(cfg.tilecoder)
    learner = ActorCriticLearner(coder.total_dim, cfg.learner_config(coder.num_active))
    spec = cfg.reward_spec()
    emg = EmgState(tau=cfg.emg_tau)
    plant = PlantState(theta=cfg.theta_init, t=0)

    realtime = cfg.pacing == "realtime"
    deadline = time.monotonic() + cfg.step_period_s if realtime else 0.0

    steps = []
    cumulative = 0.0
    fault_message = None
    exhausted = False
    for t in range(cfg.max_steps):
        if control is not None:
            control.wait_while_paused()
            if control.stopping:
                break
        try:
            s_raw = emg_source.next_raw(t)
        except SourceExhausted:
            exhausted = True
            break
        emg = smooth_emg(emg, s_raw)
        x = coder.encode(normalize_state(plant.theta, emg.s_emg, cfg.joint))
        try:
            sample = learner.sample_action(x, action_rng)
            actuated = sample.a_exec
            if jitter_rng is not None:
                actuated += float(jitter_rng.normal(0.0, jitter_std))
            moved = apply_action(plant, actuated, cfg.joint)
            theta_target = target_angle(moved.t, cfg.trajectory)
            events = feedback_source.poll(t, moved.theta, theta_target)
            r_human, spec = human_trace_step(spec, events)
            r_env = environment_reward(cfg.mode, moved.theta, theta_target, spec)
            r = total_reward(cfg.mode, r_env, r_human)
            x_next = coder.encode(normalize_state(moved.theta, emg.s_emg, cfg.joint))
            learner.step_update(x, sample, r, x_next)
        except NumericFault as exc:
            fault_message = str(exc)
            logger.error("trial aborted at step %d: %s", t, exc)
            break
        plant = moved
        cumulative += r
        record = StepRecord(
            t=t, theta=plant.theta, theta_t=theta_target, a_exec=sample.a_exec,
            mu=sample.mu, sigma=sample.sigma, r=r, r_env=r_env, r_human=r_human,
            cumulative_reward=cumulative, s_emg=emg.s_emg, num_active=len(x),
            feedback=tuple(e.value for e in events),
        )
        steps.append(record)
        if on_step is not None:
            on_step(record, learner)
        if realtime:
            now = time.monotonic()
            if now < deadline:
                time.sleep(deadline - now)
                deadline += cfg.step_period_s
            else:
                deadline = now + cfg.step_period_s
    return TrialResult.from_steps(
        steps, fault=fault_message is not None, fault_message=fault_message,
        exhausted=exhausted, seed=seed, mode=cfg.mode)
