"""Reward regimes and human-feedback handling.

Four regimes: a fixed goal-based reward, a relative (error-proportional)
variant, reward from human keypresses only, and the fixed + human
combination. Keypresses are smeared across fast learner steps through a
geometric decay trace. A scripted oracle can stand in for the human so the
feedback regimes run headless.
"""
import csv
import enum
import logging
import threading
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

logger = logging.getLogger(__name__)

FEEDBACK_POSITIVE = 1.0
FEEDBACK_NEGATIVE = -0.5
ALLOWED_FEEDBACK_VALUES = (FEEDBACK_POSITIVE, FEEDBACK_NEGATIVE)


class RewardMode(str, enum.Enum):
    FIXED = "fixed"
    RELATIVE = "relative"
    HUMAN = "human"
    FIXED_PLUS_HUMAN = "fixed+human"


@dataclass(frozen=True)
class RewardSpec:
    mode: RewardMode = RewardMode.FIXED
    deviation_threshold: float = 0.1
    human_decay: float = 0.01
    human_trace: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.human_decay < 1.0:
            raise ValueError(f"human_decay must be in [0, 1), got {self.human_decay}")


@dataclass(frozen=True)
class FeedbackEvent:
    """One keypress or oracle judgment, stamped with its application step."""
    step: int
    value: float
    source: str = "human"


def reward_fixed(theta: float, theta_t: float, spec: RewardSpec) -> float:
    """1 when tracking within the deviation threshold (inclusive), else -0.5."""
    return 1.0 if abs(theta - theta_t) <= spec.deviation_threshold else -0.5


def reward_relative(theta: float, theta_t: float, spec: RewardSpec) -> float:
    """1 within the threshold, else minus the absolute angular error."""
    err = abs(theta - theta_t)
    return 1.0 if err <= spec.deviation_threshold else -err


def human_trace_step(spec: RewardSpec, events) -> tuple:
    """Decay the human-reward trace and fold in this step's events.

    Events with illegal values are dropped with a warning. Returns the
    effective human reward for this step and the updated spec.
    """
    trace = spec.human_decay * spec.human_trace
    for event in events:
        if event.value not in ALLOWED_FEEDBACK_VALUES:
            logger.warning("dropping feedback event with illegal value %r", event.value)
            continue
        trace += event.value
    return trace, replace(spec, human_trace=trace)


def total_reward(mode: RewardMode, r_env: float, r_h_effective: float) -> float:
    if mode is RewardMode.FIXED or mode is RewardMode.RELATIVE:
        return r_env
    if mode is RewardMode.HUMAN:
        return r_h_effective
    return r_env + r_h_effective


def environment_reward(mode: RewardMode, theta: float, theta_t: float,
                       spec: RewardSpec) -> float:
    """Environment-defined reward component; zero in the human-only regime."""
    if mode is RewardMode.RELATIVE:
        return reward_relative(theta, theta_t, spec)
    if mode is RewardMode.HUMAN:
        return 0.0
    return reward_fixed(theta, theta_t, spec)


@dataclass(frozen=True)
class OracleConfig:
    """Scripted trainer: fires with probability 1/period per step, rewards
    being within threshold or reducing the error, and flips its judgment
    with probability noise_p."""
    period: int = 33
    noise_p: float = 0.1

    def __post_init__(self):
        if self.period < 1:
            raise ValueError(f"period must be >= 1, got {self.period}")
        if not 0.0 <= self.noise_p <= 1.0:
            raise ValueError(f"noise_p must be in [0, 1], got {self.noise_p}")


class NullFeedbackSource:
    """No feedback, ever."""

    def poll(self, step, theta, theta_t):
        return []


class OracleFeedbackSource:
    """Stands in for the human trainer at roughly keypress cadence."""

    def __init__(self, cfg: OracleConfig, deviation_threshold: float,
                 rng: np.random.Generator):
        self.cfg = cfg
        self.deviation_threshold = deviation_threshold
        self.rng = rng
        self.prev_error = None

    def poll(self, step, theta, theta_t):
        if self.rng.random() >= 1.0 / self.cfg.period:
            return []
        error = abs(theta - theta_t)
        good = error <= self.deviation_threshold or (
            self.prev_error is not None and error < self.prev_error)
        self.prev_error = error
        if self.cfg.noise_p > 0 and self.rng.random() < self.cfg.noise_p:
            good = not good
        value = FEEDBACK_POSITIVE if good else FEEDBACK_NEGATIVE
        return [FeedbackEvent(step=step, value=value, source="oracle")]


class ScriptedFeedbackSource:
    """Delivers a fixed schedule of feedback values keyed by step."""

    def __init__(self, schedule, source="oracle"):
        self.schedule = {int(k): list(v) for k, v in schedule.items()}
        self.source = source

    @classmethod
    def from_csv(cls, path) -> "ScriptedFeedbackSource":
        """Load a recorded feedback trace: CSV with columns step, value."""
        schedule = {}
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"step", "value"} <= set(reader.fieldnames):
                raise ValueError(f"{path}: expected a CSV with step and value columns")
            for row in reader:
                schedule.setdefault(int(row["step"]), []).append(float(row["value"]))
        return cls(schedule, source="human")

    def poll(self, step, theta, theta_t):
        return [FeedbackEvent(step=step, value=v, source=self.source)
                for v in self.schedule.get(step, ())]


class QueueFeedbackSource:
    """Thread-safe buffer for feedback arriving from outside the trial loop.

    Bounded; on overflow the oldest pending value is dropped with a warning.
    The loop drains everything pending once per step.
    """

    def __init__(self, maxlen: int = 64):
        self._lock = threading.Lock()
        self._pending = deque(maxlen=maxlen)
        self.dropped = 0

    def push(self, value: float, source: str = "human") -> bool:
        if value not in ALLOWED_FEEDBACK_VALUES:
            return False
        with self._lock:
            if len(self._pending) == self._pending.maxlen:
                self.dropped += 1
                logger.warning("feedback queue full, dropping oldest pending value")
            self._pending.append((value, source))
        return True

    def poll(self, step, theta, theta_t):
        with self._lock:
            pending = list(self._pending)
            self._pending.clear()
        return [FeedbackEvent(step=step, value=v, source=s) for v, s in pending]
