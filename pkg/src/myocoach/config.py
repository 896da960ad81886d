"""Experiment configuration: one object that pins every knob of a run.

Defaults reproduce the reference training setup (40k steps at 33 Hz, paper
step sizes scaled by the active-feature count, the trapezoidal target, the
simulated EMG channel). Configs load from TOML or JSON files; CLI flags
override individual fields.
"""
import dataclasses
import json
from dataclasses import dataclass, field, fields

import numpy as np

from .emg import ReplayEmgSource, SimEmgConfig, SimulatedEmgSource
from .learner import LearnerConfig
from .plant import JointConfig, TrajectoryConfig
from .rewards import (NullFeedbackSource, OracleConfig, OracleFeedbackSource,
                      RewardMode, RewardSpec, ScriptedFeedbackSource)
from .tilecoding import TileCoderConfig

DEFAULT_SEEDS = tuple(range(1, 11))


@dataclass(frozen=True)
class LearnerParams:
    """Learner hyperparameters; step sizes left as None scale with the
    number of active features (0.01/m critic, 0.005/m actor)."""
    alpha_v: float = None
    alpha_mu: float = None
    alpha_sigma: float = None
    gamma: float = 0.9
    lambda_w: float = 0.3
    lambda_v: float = 0.7
    sigma_min: float = 0.01
    update_with: str = "raw"

    def resolve(self, num_active: int, action_limit: float) -> LearnerConfig:
        return LearnerConfig(
            alpha_v=self.alpha_v if self.alpha_v is not None else 0.01 / num_active,
            alpha_mu=self.alpha_mu if self.alpha_mu is not None else 0.005 / num_active,
            alpha_sigma=self.alpha_sigma if self.alpha_sigma is not None else 0.005 / num_active,
            gamma=self.gamma,
            lambda_w=self.lambda_w,
            lambda_v=self.lambda_v,
            sigma_min=self.sigma_min,
            action_limit=action_limit,
            update_with=self.update_with,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    mode: RewardMode = RewardMode.FIXED
    max_steps: int = 40000
    seeds: tuple = DEFAULT_SEEDS
    theta_init: float = 0.78975
    emg_tau: float = 0.05
    human_decay: float = 0.01
    # emg source: "simulated", "replay", or "live" (live sources are injected
    # by the session service, not constructed from config)
    emg_source: str = "simulated"
    emg_trace: str = None
    # feedback source: "auto" (oracle for human modes, none otherwise),
    # "none", "oracle", or "replay"
    feedback: str = "auto"
    feedback_trace: str = None
    pacing: str = "fast"
    step_period_s: float = 0.03
    telemetry_every: int = 1
    output_dir: str = "runs"
    tilecoder: TileCoderConfig = field(default_factory=TileCoderConfig)
    joint: JointConfig = field(default_factory=JointConfig)
    trajectory: TrajectoryConfig = field(default_factory=TrajectoryConfig)
    sim_emg: SimEmgConfig = field(default_factory=SimEmgConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    learner: LearnerParams = field(default_factory=LearnerParams)

    def __post_init__(self):
        object.__setattr__(self, "mode", RewardMode(self.mode))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if self.pacing not in ("fast", "realtime"):
            raise ValueError(f"pacing must be 'fast' or 'realtime', got {self.pacing!r}")
        if self.telemetry_every < 1:
            raise ValueError(f"telemetry_every must be >= 1, got {self.telemetry_every}")
        if self.emg_source not in ("simulated", "replay", "live"):
            raise ValueError(
                f"emg_source must be 'simulated', 'replay', or 'live', got {self.emg_source!r}")
        if self.feedback not in ("auto", "none", "oracle", "replay"):
            raise ValueError(f"unknown feedback source {self.feedback!r}")
        if not (self.joint.theta_min < self.trajectory.theta_lo
                < self.trajectory.theta_hi < self.joint.theta_max):
            raise ValueError("target trajectory must sit strictly inside the joint range")
        if not self.joint.theta_min <= self.theta_init <= self.joint.theta_max:
            raise ValueError(f"theta_init {self.theta_init} outside the joint range")

    def learner_config(self, num_active: int) -> LearnerConfig:
        return self.learner.resolve(num_active, self.joint.action_limit)

    def reward_spec(self) -> RewardSpec:
        return RewardSpec(mode=self.mode,
                          deviation_threshold=self.joint.deviation_threshold,
                          human_decay=self.human_decay)

    def make_emg_source(self, rng: np.random.Generator):
        if self.emg_source == "live":
            raise ValueError("a live EMG source must be injected by the session service")
        if self.emg_source == "replay":
            if not self.emg_trace:
                raise ValueError("emg_source 'replay' requires emg_trace")
            return ReplayEmgSource.from_csv(self.emg_trace)
        return SimulatedEmgSource(self.trajectory, self.sim_emg, rng)

    def make_feedback_source(self, rng: np.random.Generator):
        kind = self.feedback
        if kind == "auto":
            uses_human = self.mode in (RewardMode.HUMAN, RewardMode.FIXED_PLUS_HUMAN)
            kind = "oracle" if uses_human else "none"
        if kind == "none":
            return NullFeedbackSource()
        if kind == "oracle":
            return OracleFeedbackSource(self.oracle, self.joint.deviation_threshold, rng)
        if not self.feedback_trace:
            raise ValueError("feedback 'replay' requires feedback_trace")
        return ScriptedFeedbackSource.from_csv(self.feedback_trace)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["mode"] = self.mode.value
        out["seeds"] = list(self.seeds)
        out["tilecoder"]["resolutions"] = list(self.tilecoder.resolutions)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        for name, sub in (("tilecoder", TileCoderConfig), ("joint", JointConfig),
                          ("trajectory", TrajectoryConfig), ("sim_emg", SimEmgConfig),
                          ("oracle", OracleConfig), ("learner", LearnerParams)):
            if name in data and isinstance(data[name], dict):
                data[name] = sub(**data[name])
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


def load_config_file(path) -> dict:
    """Read a TOML or JSON config file into a plain dict."""
    text = open(path, "rb").read()
    if str(path).endswith(".json"):
        return json.loads(text)
    try:
        import tomllib
    except ImportError:
        import tomli as tomllib
    return tomllib.loads(text.decode())
