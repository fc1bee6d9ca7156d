import unittest
import numpy as np

from healthmarl.algo import compute_gae, compute_value_targets, discounted_returns


class TestComputeGae(unittest.TestCase):
    def test_undiscounted(self):
        advantages = compute_gae([1.0, 1.0], [0.0, 0.0, 0.0], gamma=1.0, lam=1.0)
        np.testing.assert_allclose(advantages, [2.0, 1.0])

    def test_discounted(self):
        advantages = compute_gae([0.0, 1.0], [0.5, 0.5, 0.0], gamma=0.99, lam=0.95)
        np.testing.assert_allclose(advantages, [0.46525, 0.5], rtol=1e-12)

    def test_zero(self):
        np.testing.assert_array_equal(compute_gae(np.zeros(5), np.zeros(6), 0.99, 0.95),
                                      np.zeros(5))

    def test_shape_mismatch(self):
        self.assertRaises(ValueError, compute_gae, np.zeros(5), np.zeros(5), 0.99, 0.95)
        self.assertRaises(ValueError, compute_gae, np.zeros((2, 5)), np.zeros((3, 6)),
                          0.99, 0.95)

    def test_limits_of_lambda(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            T = rng.integers(1, 12)
            gamma = rng.uniform(0.5, 1.0)
            rewards = rng.normal(size=T)
            values = np.append(rng.normal(size=T), 0.0)
            np.testing.assert_allclose(compute_gae(rewards, values, gamma, 1.0),
                                       discounted_returns(rewards, gamma) - values[:-1],
                                       atol=1e-10)
            np.testing.assert_allclose(compute_gae(rewards, values, gamma, 0.0),
                                       rewards + gamma * values[1:] - values[:-1],
                                       atol=1e-12)

    def test_batched_rows_are_independent(self):
        rng = np.random.default_rng(1)
        rewards, values = rng.normal(size=(3, 4, 7)), rng.normal(size=(3, 4, 8))
        batched = compute_gae(rewards, values, 0.9, 0.8)
        for index in np.ndindex(3, 4):
            np.testing.assert_allclose(batched[index],
                                       compute_gae(rewards[index], values[index], 0.9, 0.8),
                                       rtol=1e-14)


class TestValueTargets(unittest.TestCase):
    def test_adds_values(self):
        np.testing.assert_allclose(compute_value_targets([1.0, -1.0], [0.5, 0.25]),
                                   [1.5, -0.75])

    def test_drops_bootstrap(self):
        np.testing.assert_allclose(compute_value_targets([1.0, -1.0], [0.5, 0.25, 9.0]),
                                   [1.5, -0.75])

    def test_mismatch(self):
        self.assertRaises(ValueError, compute_value_targets, np.zeros(3), np.zeros(5))


class TestDiscountedReturns(unittest.TestCase):
    def test_reward_to_go(self):
        np.testing.assert_allclose(discounted_returns([1.0, 2.0, 3.0]), [6.0, 5.0, 3.0])
        np.testing.assert_allclose(discounted_returns([1.0, 2.0, 3.0], 0.5),
                                   [1.0 + 1.0 + 0.75, 2.0 + 1.5, 3.0])


def main():
    unittest.main()


if __name__ == '__main__':
    main()
