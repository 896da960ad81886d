"""EMG control channel: smoothing filter and raw-signal sources.

The raw signal is rectified and exponentially time-averaged into the scalar
control signal that enters the state. Sources are pluggable: a simulated
source derives the raw signal from the target trajectory plus noise, a replay
source reads a recorded CSV trace, and a live source buffers samples pushed
in from outside the trial loop.
"""
import csv
import threading
from dataclasses import dataclass

import numpy as np

from .plant import TrajectoryConfig, target_phase


class SourceExhausted(Exception):
    """A finite raw-signal source ran out of samples; the trial ends cleanly."""


@dataclass(frozen=True)
class EmgState:
    """Smoothed signal level and the filter time constant."""
    s_emg: float = 0.0
    tau: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")


def smooth_emg(state: EmgState, s_raw: float) -> EmgState:
    """Rectify the raw sample and fold it into the running average."""
    s_emg = (1.0 - state.tau) * state.s_emg + state.tau * abs(s_raw)
    return EmgState(s_emg=s_emg, tau=state.tau)


@dataclass(frozen=True)
class SimEmgConfig:
    level_lo: float = 0.1
    level_hi: float = 0.8
    noise_std: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.level_lo < self.level_hi <= 1.0:
            raise ValueError(
                f"need 0 <= level_lo < level_hi <= 1, got {self.level_lo}, {self.level_hi}")
        if self.noise_std < 0:
            raise ValueError(f"noise_std must be >= 0, got {self.noise_std}")


def simulated_emg_raw(theta_t_norm: float, cfg: SimEmgConfig,
                      rng: np.random.Generator) -> float:
    """Noisy raw sample tracking the target's normalized phase, in [0, 1]."""
    level = cfg.level_lo + theta_t_norm * (cfg.level_hi - cfg.level_lo)
    if cfg.noise_std > 0:
        level += float(rng.normal(0.0, cfg.noise_std))
    return min(1.0, max(0.0, level))


class SimulatedEmgSource:
    """Raw signal derived from where the target trajectory sits at step t."""

    def __init__(self, trajectory: TrajectoryConfig, cfg: SimEmgConfig,
                 rng: np.random.Generator):
        self.trajectory = trajectory
        self.cfg = cfg
        self.rng = rng

    def next_raw(self, t: int) -> float:
        return simulated_emg_raw(target_phase(t, self.trajectory), self.cfg, self.rng)


class ReplayEmgSource:
    """Plays back a recorded raw trace, one sample per step, then exhausts."""

    def __init__(self, samples):
        self.samples = list(samples)
        self._pos = 0

    @classmethod
    def from_csv(cls, path) -> "ReplayEmgSource":
        """Load a one-column CSV trace with header column `s_raw`."""
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or "s_raw" not in reader.fieldnames:
                raise ValueError(f"{path}: expected a CSV with an s_raw column")
            return cls(float(row["s_raw"]) for row in reader)

    def next_raw(self, t: int) -> float:
        if self._pos >= len(self.samples):
            raise SourceExhausted(f"replay trace exhausted after {len(self.samples)} samples")
        sample = self.samples[self._pos]
        self._pos += 1
        return sample


class LiveEmgSource:
    """Holds the most recent sample pushed from another thread.

    next_raw never blocks; until the first push it reports zero, afterwards it
    repeats the latest sample between pushes.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._latest = 0.0

    def push(self, s_raw: float):
        with self._lock:
            self._latest = float(s_raw)

    def next_raw(self, t: int) -> float:
        with self._lock:
            return self._latest
