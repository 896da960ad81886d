"""Continuous actor-critic learner over sparse binary features.

Gaussian policy with mean and log-deviation linear in the features, TD
critic with replacing traces, actor with accumulating traces. All updates
are incremental: traces decay globally, active features contribute through
their index set only.
"""
import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .tilecoding import SparseFeatures, sparse_dot


class NumericFault(RuntimeError):
    """Raised when a TD error or policy parameter goes non-finite."""


@dataclass(frozen=True)
class LearnerConfig:
    alpha_v: float
    alpha_mu: float
    alpha_sigma: float
    gamma: float = 0.9
    lambda_w: float = 0.3
    lambda_v: float = 0.7
    sigma_min: float = 0.01
    action_limit: float = 0.05
    # which action feeds the (a - mu) update terms: the raw draw (default) or
    # the executed (clipped) action. With the clipped action the deviation
    # term is biased to -sigma^2 whenever sigma outgrows the action limit,
    # which turns persistent negative TD error into unbounded sigma growth.
    update_with: str = "raw"

    def __post_init__(self):
        if self.update_with not in ("executed", "raw"):
            raise ValueError(f"update_with must be 'executed' or 'raw', got {self.update_with!r}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")

    @classmethod
    def defaults_for(cls, num_active: int, **overrides) -> "LearnerConfig":
        """Step sizes scaled by the number of active features."""
        params = dict(
            alpha_v=0.01 / num_active,
            alpha_mu=0.005 / num_active,
            alpha_sigma=0.005 / num_active,
        )
        params.update(overrides)
        return cls(**params)


@dataclass(frozen=True)
class ActionSample:
    """One policy draw: mean, deviation, raw draw, and the clipped value executed."""
    mu: float
    sigma: float
    a_raw: float
    a_exec: float


CHECKPOINT_VERSION = 1


class ActorCriticLearner:
    """Holds the six weight/trace vectors and applies the per-step update."""

    def __init__(self, n: int, config: LearnerConfig):
        self.n = n
        self.config = config
        self.w_mu = np.zeros(n)
        self.w_sigma = np.zeros(n)
        self.v = np.zeros(n)
        self.e_mu = np.zeros(n)
        self.e_sigma = np.zeros(n)
        self.e_v = np.zeros(n)

    def reset(self):
        """Zero all weights and traces; hyperparameters are retained."""
        for vec in (self.w_mu, self.w_sigma, self.v, self.e_mu, self.e_sigma, self.e_v):
            vec.fill(0.0)

    def policy_params(self, x: SparseFeatures):
        """Policy mean and deviation at the given features, deviation floored."""
        mu = sparse_dot(self.w_mu, x)
        log_sigma = sparse_dot(self.w_sigma, x)
        try:
            sigma = max(self.config.sigma_min, math.exp(log_sigma))
        except OverflowError:
            raise NumericFault(f"policy deviation overflowed (w_sigma.x = {log_sigma})")
        if not (math.isfinite(mu) and math.isfinite(sigma)):
            raise NumericFault(f"non-finite policy parameters mu={mu} sigma={sigma}")
        return mu, sigma

    def sample_action(self, x: SparseFeatures, rng: np.random.Generator) -> ActionSample:
        mu, sigma = self.policy_params(x)
        a_raw = float(rng.normal(mu, sigma))
        limit = self.config.action_limit
        a_exec = min(limit, max(-limit, a_raw))
        return ActionSample(mu=mu, sigma=sigma, a_raw=a_raw, a_exec=a_exec)

    def step_update(self, x: SparseFeatures, sample: ActionSample, r: float,
                    x_next: SparseFeatures) -> float:
        """One actor-critic update for the transition (x, a, r, x_next).

        The TD error is computed from the pre-update critic, then the critic
        (replacing trace) and both actor parameter sets (accumulating traces)
        are stepped. Returns the TD error.
        """
        cfg = self.config
        a = sample.a_exec if cfg.update_with == "executed" else sample.a_raw
        mu, sigma = sample.mu, sample.sigma
        delta = r + cfg.gamma * sparse_dot(self.v, x_next) - sparse_dot(self.v, x)
        if not math.isfinite(delta):
            raise NumericFault(f"non-finite TD error delta={delta}")
        try:
            dev_term = (a - mu) ** 2 - sigma ** 2
        except OverflowError:
            raise NumericFault(f"deviation trace term overflowed (a={a}, mu={mu}, sigma={sigma})")
        idx = list(x.active_indices)

        self.e_v *= cfg.lambda_v * cfg.gamma
        self.e_v[idx] += 1.0
        np.minimum(self.e_v, 1.0, out=self.e_v)
        self.v += cfg.alpha_v * delta * self.e_v

        self.e_mu *= cfg.lambda_w
        self.e_mu[idx] += a - mu
        self.w_mu += cfg.alpha_mu * delta * self.e_mu

        self.e_sigma *= cfg.lambda_w
        self.e_sigma[idx] += dev_term
        self.w_sigma += cfg.alpha_sigma * delta * self.e_sigma
        return delta

    def to_checkpoint(self) -> dict:
        """JSON-serializable snapshot; floats round-trip bit-faithfully."""
        return {
            "version": CHECKPOINT_VERSION,
            "n": self.n,
            "config": asdict(self.config),
            "w_mu": self.w_mu.tolist(),
            "w_sigma": self.w_sigma.tolist(),
            "v": self.v.tolist(),
            "e_mu": self.e_mu.tolist(),
            "e_sigma": self.e_sigma.tolist(),
            "e_v": self.e_v.tolist(),
        }

    @classmethod
    def from_checkpoint(cls, snapshot: dict) -> "ActorCriticLearner":
        version = snapshot.get("version")
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version!r}")
        learner = cls(int(snapshot["n"]), LearnerConfig(**snapshot["config"]))
        for name in ("w_mu", "w_sigma", "v", "e_mu", "e_sigma", "e_v"):
            vec = np.asarray(snapshot[name], dtype=float)
            if vec.shape != (learner.n,):
                raise ValueError(f"checkpoint vector {name} has shape {vec.shape}, expected ({learner.n},)")
            setattr(learner, name, vec)
        return learner

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_checkpoint(), fh)

    @classmethod
    def load(cls, path) -> "ActorCriticLearner":
        with open(path) as fh:
            return cls.from_checkpoint(json.load(fh))
