"""Interactive actor-critic training workbench for a simulated myoelectric joint."""

from .config import ExperimentConfig, LearnerParams
from .emg import EmgState, SimEmgConfig, smooth_emg
from .learner import ActionSample, ActorCriticLearner, LearnerConfig, NumericFault
from .plant import JointConfig, PlantState, TrajectoryConfig, apply_action, normalize_state, target_angle
from .rewards import (FeedbackEvent, OracleConfig, RewardMode, RewardSpec,
                      reward_fixed, reward_relative, total_reward)
from .tilecoding import SparseFeatures, TileCoder, TileCoderConfig, build_tilecoder, sparse_dot
from .trial import TrialControl, TrialResult, fraction_within, mae, run_trial
from .experiment import aggregate, compare_conditions, run_experiment

__version__ = "0.1.0"
