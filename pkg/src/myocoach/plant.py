"""Simulated single joint and the periodic target trajectory it tracks.

The joint integrates angular-displacement actions kinematically within hard
limits (modeled on a small humanoid elbow roll). The target is a two-phase
trapezoidal wave: hold low, ramp up, hold high, ramp down.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class JointConfig:
    theta_min: float = 0.0349
    theta_max: float = 1.5446
    action_limit: float = 0.05
    deviation_threshold: float = 0.1
    # additive actuation jitter applied to each executed displacement; the
    # simulator is ideal by default
    actuation_noise_std: float = 0.0

    def __post_init__(self):
        if not self.theta_min < self.theta_max:
            raise ValueError(f"theta_min {self.theta_min} must be < theta_max {self.theta_max}")
        if self.action_limit <= 0 or self.deviation_threshold <= 0:
            raise ValueError("action_limit and deviation_threshold must be positive")
        if self.actuation_noise_std < 0:
            raise ValueError(f"actuation_noise_std must be >= 0, got {self.actuation_noise_std}")


@dataclass(frozen=True)
class TrajectoryConfig:
    theta_lo: float = 0.5
    theta_hi: float = 1.0
    dwell_steps: int = 1000
    ramp_steps: int = 200

    def __post_init__(self):
        if not self.theta_lo < self.theta_hi:
            raise ValueError(f"theta_lo {self.theta_lo} must be < theta_hi {self.theta_hi}")
        if self.dwell_steps < 1 or self.ramp_steps < 0:
            raise ValueError("dwell_steps must be >= 1 and ramp_steps >= 0")

    @property
    def period(self) -> int:
        return 2 * (self.dwell_steps + self.ramp_steps)


@dataclass(frozen=True)
class PlantState:
    theta: float
    t: int = 0


def target_angle(t: int, cfg: TrajectoryConfig) -> float:
    """Target angle at step t: low plateau, linear ramp, high plateau, ramp back."""
    phase = t % cfg.period
    dwell, ramp = cfg.dwell_steps, cfg.ramp_steps
    span = cfg.theta_hi - cfg.theta_lo
    if phase < dwell:
        return cfg.theta_lo
    if phase < dwell + ramp:
        return cfg.theta_lo + span * (phase - dwell) / ramp
    if phase < 2 * dwell + ramp:
        return cfg.theta_hi
    return cfg.theta_hi - span * (phase - 2 * dwell - ramp) / ramp


def target_phase(t: int, cfg: TrajectoryConfig) -> float:
    """Target position normalized to [0, 1] between the two plateaus."""
    return (target_angle(t, cfg) - cfg.theta_lo) / (cfg.theta_hi - cfg.theta_lo)


def apply_action(state: PlantState, a_exec: float, cfg: JointConfig) -> PlantState:
    """Integrate one displacement, clamping at the joint limits."""
    theta = min(cfg.theta_max, max(cfg.theta_min, state.theta + a_exec))
    return PlantState(theta=theta, t=state.t + 1)


def normalize_state(theta: float, s_emg: float, cfg: JointConfig):
    """Map (joint angle, smoothed control signal) to the unit square."""
    theta_norm = (theta - cfg.theta_min) / (cfg.theta_max - cfg.theta_min)
    emg_norm = min(1.0, max(0.0, s_emg))
    return (theta_norm, emg_norm)
