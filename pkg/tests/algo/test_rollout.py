import unittest
import numpy as np

from healthmarl.algo import collect_rollouts
from healthmarl.core import constrict_actions
from healthmarl.nn import policy_init, policy_mean
from healthmarl.utils import clip_actions
from . import deadly_navigation, navigation


class TestCollectRollouts(unittest.TestCase):
    def setUp(self):
        self.env = deadly_navigation()
        self.policy = policy_init(self.env.observation_dim, self.env.action_dim,
                                  np.random.default_rng(0), hidden=(8,), output_gain=1.0)
        self.batch = collect_rollouts(self.policy, self.env, 5, seed=0)

    def test_shapes(self):
        batch, env = self.batch, self.env
        self.assertEqual(batch.n_episodes, 5)
        self.assertEqual(batch.horizon, env.episode_length)
        self.assertEqual(batch.n_agents, 3)
        self.assertEqual(batch.n_samples, 5 * env.episode_length * 3)
        self.assertEqual(batch.observations.shape, (5, 7, 3, env.observation_dim))
        self.assertEqual(batch.executed_actions.shape, (5, 6, 3, 2))
        np.testing.assert_array_equal(batch.times, np.arange(7))
        np.testing.assert_array_equal(batch.dones[:, -1], True)
        np.testing.assert_array_equal(batch.dones[:, :-1], False)
        np.testing.assert_allclose(batch.episode_returns, batch.rewards.sum(axis=1))

    def test_executed_actions(self):
        batch = self.batch
        expected = constrict_actions(clip_actions(batch.actions), batch.health[:, :-1])
        np.testing.assert_array_equal(batch.executed_actions, expected)
        dead = batch.health[:, :-1] == 0.0
        self.assertTrue(np.any(dead))
        np.testing.assert_array_equal(batch.executed_actions[dead], 0.0)

    def test_health_never_recovers(self):
        self.assertTrue(np.all(np.diff(self.batch.health, axis=1) <= 0.0))

    def test_dead_observations_are_frozen(self):
        batch = self.batch
        for e, t, i in zip(*np.nonzero(batch.health[:, 1:-1] == 0.0)):
            np.testing.assert_array_equal(batch.observations[e, t + 2, i],
                                          batch.observations[e, t + 1, i])

    def test_deterministic(self):
        again = collect_rollouts(self.policy, self.env, 5, seed=0)
        for field, other in zip(self.batch, again):
            self.assertEqual(np.asarray(field).tobytes(), np.asarray(other).tobytes())
        different = collect_rollouts(self.policy, self.env, 5, seed=1)
        self.assertFalse(np.array_equal(self.batch.actions, different.actions))

    def test_episode_streams_are_independent(self):
        pair = collect_rollouts(self.policy, self.env, 2, seed=3)
        many = collect_rollouts(self.policy, self.env, 6, seed=3)
        np.testing.assert_array_equal(many.health[:2], pair.health[:2])
        np.testing.assert_array_equal(many.observations[:2], pair.observations[:2])

    def test_log_probs_follow_the_sampled_actions(self):
        batch = self.batch
        mean = policy_mean(self.policy, batch.observations[:, :-1])
        std = np.exp(self.policy.log_std)
        z = (batch.actions - mean) / std
        expected = np.sum(-0.5 * z ** 2 - np.log(std) - 0.5 * np.log(2 * np.pi), axis=-1)
        np.testing.assert_allclose(batch.log_probs, expected, rtol=1e-10)

    def test_greedy(self):
        env = navigation(n_agents=2, episode_length=4, hazard=False, p_fail=0.0)
        policy = policy_init(env.observation_dim, env.action_dim, np.random.default_rng(1),
                             hidden=(8,))
        batch = collect_rollouts(policy, env, 2, seed=0, greedy=True)
        np.testing.assert_allclose(batch.actions,
                                   policy_mean(policy, batch.observations[:, :-1]),
                                   rtol=1e-12, atol=1e-15)

    def test_state_and_history(self):
        batch = self.batch
        state = batch.state(1, 2)
        np.testing.assert_array_equal(state.health.values, batch.health[1, 2])
        self.assertEqual(state.time, 2)
        history = batch.history(1, 0, 2)
        self.assertEqual(history.length, 3)
        self.assertTrue(history.awaiting_action)
        np.testing.assert_array_equal(history.observations[-1], batch.observations[1, 2, 0])


def main():
    unittest.main()


if __name__ == '__main__':
    main()
