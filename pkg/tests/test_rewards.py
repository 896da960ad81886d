import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from myocoach.rewards import (FEEDBACK_NEGATIVE, FEEDBACK_POSITIVE,
                              FeedbackEvent, NullFeedbackSource, OracleConfig,
                              OracleFeedbackSource, QueueFeedbackSource,
                              RewardMode, RewardSpec, ScriptedFeedbackSource,
                              environment_reward, human_trace_step,
                              reward_fixed, reward_relative, total_reward)

SPEC = RewardSpec(deviation_threshold=0.1)


def events(*values, step=0):
    return [FeedbackEvent(step=step, value=v) for v in values]


class TestFixedReward:
    def test_within_threshold(self):
        assert reward_fixed(0.55, 0.5, SPEC) == 1.0

    def test_outside_threshold(self):
        assert reward_fixed(0.7, 0.5, SPEC) == -0.5

    def test_boundary_inclusive(self):
        assert reward_fixed(0.6, 0.5, SPEC) == 1.0

    def test_values_are_binary(self):
        for theta in np.linspace(0.0349, 1.5446, 200):
            assert reward_fixed(float(theta), 0.75, SPEC) in (1.0, -0.5)


class TestRelativeReward:
    def test_error_proportional_outside(self):
        assert reward_relative(0.8, 0.5, SPEC) == pytest.approx(-0.3)

    def test_perfect_tracking(self):
        assert reward_relative(0.5, 0.5, SPEC) == 1.0

    def test_unit_error(self):
        assert reward_relative(1.5, 0.5, SPEC) == pytest.approx(-1.0)

    @given(st.floats(0.0349, 1.5446), st.floats(0.0349, 1.5446))
    def test_bounds(self, theta, theta_t):
        r = reward_relative(theta, theta_t, SPEC)
        assert -(1.5446 - 0.0349) <= r <= 1.0


class TestHumanTrace:
    def test_single_positive_press(self):
        r_h, spec = human_trace_step(SPEC, events(1.0))
        assert r_h == 1.0 and spec.human_trace == 1.0

    def test_decay_without_events(self):
        spec = RewardSpec(human_trace=1.0)
        r_h, spec = human_trace_step(spec, [])
        assert r_h == pytest.approx(0.01)
        r_h, spec = human_trace_step(spec, [])
        assert r_h == pytest.approx(0.0001)

    def test_decay_is_exact_power(self):
        # exactness means the k-fold application of the decay formula itself
        spec = RewardSpec(human_trace=1.0)
        expected = 1.0
        for k in range(1, 9):
            _, spec = human_trace_step(spec, [])
            expected = 0.01 * expected
            assert spec.human_trace == expected
            assert spec.human_trace == pytest.approx(0.01 ** k, rel=1e-12)

    def test_multiple_events_summed(self):
        r_h, _ = human_trace_step(SPEC, events(1.0, 1.0, -0.5))
        assert r_h == pytest.approx(1.5)

    def test_illegal_value_dropped_with_warning(self, caplog):
        with caplog.at_level(logging.WARNING):
            r_h, _ = human_trace_step(SPEC, events(0.7, 1.0))
        assert r_h == 1.0
        assert "illegal value" in caplog.text

    def test_press_on_decayed_trace(self):
        spec = RewardSpec(human_trace=1.0)
        r_h, _ = human_trace_step(spec, events(1.0))
        assert r_h == pytest.approx(1.01)


class TestTotalReward:
    def test_fixed_plus_human_sums(self):
        assert total_reward(RewardMode.FIXED_PLUS_HUMAN, 1.0, 1.0) == 2.0

    def test_human_only_without_feedback_is_zero(self):
        spec = SPEC
        for _ in range(100):
            r_h, spec = human_trace_step(spec, [])
            assert total_reward(RewardMode.HUMAN, 0.0, r_h) == 0.0

    def test_fixed_mode_ignores_trace(self):
        r_env = environment_reward(RewardMode.FIXED, 0.55, 0.5, SPEC)
        assert total_reward(RewardMode.FIXED, r_env, 123.0) == 1.0

    def test_fixed_result_independent_of_trace_state(self):
        hot = RewardSpec(deviation_threshold=0.1, human_trace=42.0)
        assert reward_fixed(0.55, 0.5, hot) == reward_fixed(0.55, 0.5, SPEC)

    def test_human_only_has_no_env_component(self):
        assert environment_reward(RewardMode.HUMAN, 0.55, 0.5, SPEC) == 0.0

    def test_relative_mode_routes_to_relative(self):
        assert environment_reward(RewardMode.RELATIVE, 0.8, 0.5, SPEC) == pytest.approx(-0.3)


class TestOracle:
    def always_fire(self, noise_p=0.0):
        return OracleFeedbackSource(OracleConfig(period=1, noise_p=noise_p),
                                    deviation_threshold=0.1,
                                    rng=np.random.default_rng(0))

    def test_within_threshold_rewards(self):
        oracle = self.always_fire()
        (event,) = oracle.poll(5, 0.55, 0.5)
        assert event.value == FEEDBACK_POSITIVE
        assert event.step == 5 and event.source == "oracle"

    def test_growing_error_punished(self):
        oracle = self.always_fire()
        oracle.poll(0, 0.8, 0.5)
        (event,) = oracle.poll(1, 0.9, 0.5)
        assert event.value == FEEDBACK_NEGATIVE

    def test_shrinking_error_rewarded(self):
        oracle = self.always_fire()
        oracle.poll(0, 0.9, 0.5)
        (event,) = oracle.poll(1, 0.8, 0.5)
        assert event.value == FEEDBACK_POSITIVE

    def test_first_evaluation_outside_threshold_punished(self):
        (event,) = self.always_fire().poll(0, 0.9, 0.5)
        assert event.value == FEEDBACK_NEGATIVE

    def test_cadence(self):
        oracle = OracleFeedbackSource(OracleConfig(period=33, noise_p=0.0), 0.1,
                                      np.random.default_rng(3))
        fired = sum(bool(oracle.poll(t, 0.5, 0.5)) for t in range(33000))
        assert 800 <= fired <= 1200  # ~1 per 33 steps

    def test_noise_flips_judgment(self):
        oracle = self.always_fire(noise_p=1.0)
        (event,) = oracle.poll(0, 0.5, 0.5)  # perfect tracking, inverted
        assert event.value == FEEDBACK_NEGATIVE

    def test_deterministic_given_seed(self):
        polls = []
        for _ in range(2):
            oracle = OracleFeedbackSource(OracleConfig(), 0.1, np.random.default_rng(9))
            polls.append([tuple(e.value for e in oracle.poll(t, 0.7, 0.5))
                          for t in range(500)])
        assert polls[0] == polls[1]


class TestFeedbackSources:
    def test_null_source(self):
        assert NullFeedbackSource().poll(0, 0.5, 0.5) == []

    def test_scripted_schedule(self):
        source = ScriptedFeedbackSource({3: [1.0, -0.5]})
        assert source.poll(2, 0, 0) == []
        polled = source.poll(3, 0, 0)
        assert [e.value for e in polled] == [1.0, -0.5]
        assert all(e.step == 3 for e in polled)

    def test_scripted_from_csv(self, tmp_path):
        path = tmp_path / "feedback.csv"
        path.write_text("step,value\n10,1.0\n10,-0.5\n20,1.0\n")
        source = ScriptedFeedbackSource.from_csv(path)
        assert [e.value for e in source.poll(10, 0, 0)] == [1.0, -0.5]
        assert [e.value for e in source.poll(20, 0, 0)] == [1.0]

    def test_queue_drains_all_pending(self):
        queue = QueueFeedbackSource()
        for _ in range(3):
            assert queue.push(1.0)
        polled = queue.poll(7, 0, 0)
        assert [e.value for e in polled] == [1.0, 1.0, 1.0]
        assert all(e.step == 7 for e in polled)
        assert queue.poll(8, 0, 0) == []

    def test_queue_rejects_illegal_value(self):
        queue = QueueFeedbackSource()
        assert not queue.push(0.7)
        assert queue.poll(0, 0, 0) == []

    def test_queue_overflow_drops_oldest(self, caplog):
        queue = QueueFeedbackSource(maxlen=4)
        queue.push(-0.5)
        with caplog.at_level(logging.WARNING):
            for _ in range(4):
                queue.push(1.0)
        assert queue.dropped == 1
        assert [e.value for e in queue.poll(0, 0, 0)] == [1.0] * 4

    def test_invalid_oracle_config(self):
        with pytest.raises(ValueError):
            OracleConfig(period=0)
        with pytest.raises(ValueError):
            OracleConfig(noise_p=1.5)
