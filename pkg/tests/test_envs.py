import math

import numpy as np
import pytest

from voronoi_distill.envs import (
    MountainCarEnv,
    SimpleGoalEnv,
    make_env,
    mountaincar_reset,
    mountaincar_step,
    simplegoal_reset,
    simplegoal_step,
)
from voronoi_distill.envs.simplegoal import goal_distance, in_goal, in_pitfall
from voronoi_distill.utils.exceptions import ConfigError, DimensionError


def reference_mountaincar_step(position, velocity, force):
    """Scalar transcription of the public continuous mountain car dynamics."""
    force = min(max(force, -1.0), 1.0)
    velocity += force * 0.0015 - 0.0025 * math.cos(3 * position)
    velocity = min(max(velocity, -0.07), 0.07)
    position += velocity
    position = min(max(position, -1.2), 0.6)
    if position == -1.2 and velocity < 0:
        velocity = 0.0
    done = bool(position >= 0.45 and velocity >= 0.0)
    reward = (100.0 if done else 0.0) - math.pow(force, 2) * 0.1
    return position, velocity, reward, done


class TestRegistry:
    def test_make_env(self):
        assert isinstance(make_env("simplegoal-v0"), SimpleGoalEnv)
        assert isinstance(make_env("MountainCarContinuous-v0"), MountainCarEnv)

    def test_unknown_env(self):
        with pytest.raises(ConfigError) as info:
            make_env("cartpole-v1")
        assert info.value.key == "env"


class TestSimpleGoal:
    def test_reset_avoids_goal_and_pitfall(self):
        rng = np.random.default_rng(0)
        starts = np.array([simplegoal_reset(rng) for _ in range(100_000)])
        assert not any(in_goal(s) or in_pitfall(s) for s in starts)
        assert abs(starts[:, 0].mean() - 0.5) < 0.02

    def test_reset_is_seeded(self):
        a = simplegoal_reset(np.random.default_rng(3))
        b = simplegoal_reset(np.random.default_rng(3))
        np.testing.assert_array_equal(a, b)

    def test_diagonal_step(self):
        result = simplegoal_step([0.9, 0.9], [-1.0, -1.0])
        np.testing.assert_allclose(result.next_state, [0.8, 0.8])
        assert result.reward == pytest.approx(10 * (1.20208 - 1.06066), abs=1e-4)
        assert result.reward == pytest.approx(1.4142, abs=1e-4)
        assert not result.terminated

    def test_pitfall_terminates(self):
        result = simplegoal_step([0.35, 0.5], [1.0, 0.0])
        assert in_pitfall(result.next_state)
        progress = 10 * (goal_distance([0.35, 0.5]) - goal_distance(result.next_state))
        assert result.reward == pytest.approx(progress - 10.0)
        assert result.terminated

    def test_goal_terminates(self):
        result = simplegoal_step([0.15, 0.05], [-1.0, 0.0])
        assert in_goal(result.next_state)
        assert result.reward == pytest.approx(10 * (0.1 - 0.0) + 10.0)
        assert result.terminated

    def test_zero_action(self):
        result = simplegoal_step([0.8, 0.2], [0.0, 0.0])
        np.testing.assert_array_equal(result.next_state, [0.8, 0.2])
        assert result.reward == 0.0

    def test_boundaries_belong_to_neither_region(self):
        assert not in_pitfall([0.4, 0.5])
        assert not in_goal([0.1, 0.05])

    def test_action_is_clamped(self):
        result = simplegoal_step([0.5, 0.9], [5.0, 0.0])
        np.testing.assert_allclose(result.next_state, [0.6, 0.9])

    def test_truncates_at_fifty(self):
        env = SimpleGoalEnv()
        env.reset(np.random.default_rng(0))
        env.state = np.array([0.9, 0.9])
        results = [env.step([0.0, 0.0]) for _ in range(50)]
        assert not any(r.truncated for r in results[:-1])
        assert results[-1].truncated

    def test_returns_telescope(self):
        env = SimpleGoalEnv()
        start = env.reset(np.random.default_rng(1))
        total, state = 0.0, start
        for _ in range(50):
            result = env.step([-0.3, -0.7])
            total += result.reward
            state = result.next_state
            if result.terminated or result.truncated:
                break
        bonus = 10.0 if in_goal(state) else (-10.0 if in_pitfall(state) else 0.0)
        assert total == pytest.approx(10 * (goal_distance(start) - goal_distance(state)) + bonus)

    def test_fuzzed_states_stay_in_bounds(self):
        rng = np.random.default_rng(2)
        state = np.array([0.5, 0.9])
        for _ in range(100_000):
            state = simplegoal_step(state, rng.uniform(-3, 3, size=2)).next_state
            assert 0.0 <= state[0] <= 1.0 and 0.0 <= state[1] <= 1.0

    def test_step_before_reset(self):
        with pytest.raises(RuntimeError):
            SimpleGoalEnv().step([0.0, 0.0])

    def test_wrong_action_dim(self):
        env = SimpleGoalEnv()
        env.reset(np.random.default_rng(0))
        with pytest.raises(DimensionError):
            env.step([0.0])


class TestMountainCar:
    def test_reset_law(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            x, v = mountaincar_reset(rng)
            assert -0.6 <= x <= -0.4
            assert v == 0.0

    def test_rest_step(self):
        result = mountaincar_step([-0.5, 0.0], [0.0])
        assert result.next_state[1] == pytest.approx(-0.0025 * math.cos(-1.5))
        assert result.next_state[1] == pytest.approx(-0.0001768, abs=1e-7)
        assert result.reward == 0.0

    def test_full_force_costs(self):
        result = mountaincar_step([-0.5, 0.0], [1.0])
        assert result.reward == pytest.approx(-0.1)

    def test_goal(self):
        result = mountaincar_step([0.44, 0.05], [1.0])
        assert result.terminated
        assert result.reward == pytest.approx(100.0 - 0.1)

    def test_goal_needs_forward_velocity(self):
        result = mountaincar_step([0.5, -0.01], [0.0])
        assert result.next_state[0] >= 0.45 and result.next_state[1] < 0.0
        assert not result.terminated
        assert result.reward == 0.0

    def test_left_wall_stops(self):
        result = mountaincar_step([-1.19, -0.07], [-1.0])
        assert result.next_state[0] == -1.2
        assert result.next_state[1] == 0.0

    def test_differential_against_transcription(self):
        rng = np.random.default_rng(9)
        for _ in range(10_000):
            x, v = rng.uniform(-1.2, 0.6), rng.uniform(-0.07, 0.07)
            force = rng.uniform(-1.5, 1.5)
            result = mountaincar_step([x, v], [force])
            ex, ev, er, ed = reference_mountaincar_step(x, v, force)
            assert abs(result.next_state[0] - ex) <= 1e-10
            assert abs(result.next_state[1] - ev) <= 1e-10
            assert abs(result.reward - er) <= 1e-10
            assert result.terminated == ed

    def test_differential_against_gymnasium(self):
        gym = pytest.importorskip("gymnasium")
        env = gym.make("MountainCarContinuous-v0").unwrapped
        env.reset(seed=0)
        rng = np.random.default_rng(10)
        for _ in range(10_000):
            state = np.array([rng.uniform(-1.2, 0.6), rng.uniform(-0.07, 0.07)], dtype=np.float32)
            force = np.array([rng.uniform(-1.0, 1.0)], dtype=np.float32)
            env.state = state.copy()
            expected, reward, terminated, _, _ = env.step(force)
            result = mountaincar_step(state.astype(float), force.astype(float))
            # the reference keeps float32 state
            np.testing.assert_allclose(result.next_state, expected, atol=1e-6)
            assert result.reward == pytest.approx(float(reward), abs=1e-6)
            assert result.terminated == bool(terminated)

    def test_no_force_never_reaches_goal(self):
        for seed in range(100):
            env = MountainCarEnv()
            env.reset(np.random.default_rng(seed))
            for _ in range(1000):
                result = env.step([0.0])
                assert not result.terminated
                if result.truncated:
                    break

    def test_deterministic_trajectories(self):
        def rollout(seed):
            env = MountainCarEnv()
            states = [env.reset(np.random.default_rng(seed))]
            actions = np.random.default_rng(seed + 1).uniform(-1, 1, size=(200, 1))
            states += [env.step(a).next_state for a in actions]
            return np.array(states)

        np.testing.assert_array_equal(rollout(4), rollout(4))
