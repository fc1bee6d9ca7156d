import os
import tempfile
import unittest
import numpy as np
import pandas as pd

from healthmarl.envs import make_env
from healthmarl.harness import (CURVE_COLUMNS, TRIAL_COLUMNS, TrialCurve, aggregate_curves,
                                aggregate_runs, evaluate_policy, random_policy_returns,
                                read_trial_csv, run_campaign, run_experiment)
from healthmarl.harness.experiment import make_experiment_env
from healthmarl.nn import Checkpoint, critic_init, policy_init
from healthmarl.utils import ConfigurationError
from . import tiny_config


def read_bytes(path):
    with open(path, 'rb') as f:
        return f.read()


class TestAggregateCurves(unittest.TestCase):
    def setUp(self):
        episodes = [256, 512]
        self.curves = [TrialCurve(0, episodes, [1.0, 2.0]), TrialCurve(1, episodes, [3.0, 4.0]),
                       TrialCurve(2, episodes, [5.0, 0.0])]

    def test_pointwise(self):
        curve = aggregate_curves(self.curves)
        np.testing.assert_array_equal(curve.episodes, [256, 512])
        np.testing.assert_allclose(curve.agg_mean, [3.0, 2.0])
        np.testing.assert_array_equal(curve.agg_min, [1.0, 0.0])
        np.testing.assert_array_equal(curve.agg_max, [5.0, 4.0])
        np.testing.assert_array_equal(curve.trial_returns[:, 2], [5.0, 0.0])
        self.assertEqual(list(curve.to_frame().columns), CURVE_COLUMNS)

    def test_trial_order_does_not_matter(self):
        rng = np.random.default_rng(0)
        curves = [TrialCurve(k, np.arange(10), rng.normal(size=10)) for k in range(5)]
        reference = aggregate_curves(curves)
        for _ in range(10):
            shuffled = aggregate_curves([curves[k] for k in rng.permutation(5)])
            for name in ['agg_mean', 'agg_min', 'agg_max']:
                self.assertEqual(getattr(shuffled, name).tobytes(),
                                 getattr(reference, name).tobytes())

    def test_single_trial(self):
        curve = aggregate_curves(self.curves[:1])
        np.testing.assert_array_equal(curve.agg_min, curve.agg_mean)
        np.testing.assert_array_equal(curve.agg_max, curve.agg_mean)

    def test_mismatch(self):
        self.assertRaises(ValueError, aggregate_curves, [])
        self.assertRaises(ValueError, aggregate_curves,
                          self.curves + [TrialCurve(3, [256], [1.0])])
        self.assertRaises(ValueError, aggregate_curves,
                          self.curves + [TrialCurve(3, [256, 768], [1.0, 1.0])])


class TestRunExperiment(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.out = self.directory.name

    def tearDown(self):
        self.directory.cleanup()

    def test_outputs(self):
        curve = run_experiment(tiny_config(self.out))
        for name in ['config.txt', 'curve.csv', 'trial_0.csv', 'trial_1.csv', 'trial_0.ckpt',
                     'trial_1.ckpt', os.path.join('checkpoints', 'trial_0_iter_1.ckpt'),
                     os.path.join('checkpoints', 'trial_1_iter_2.ckpt')]:
            self.assertTrue(os.path.exists(os.path.join(self.out, name)), name)
        self.assertFalse(os.path.exists(os.path.join(self.out, 'checkpoints',
                                                     'trial_0_crash.ckpt')))

        frame = pd.read_csv(os.path.join(self.out, 'curve.csv'))
        self.assertEqual(list(frame.columns), CURVE_COLUMNS)
        np.testing.assert_array_equal(frame['episode'], [4, 8])
        np.testing.assert_array_equal(curve.episodes, [4, 8])
        self.assertTrue(np.all(frame['agg_min'] <= frame['agg_mean']))
        self.assertTrue(np.all(frame['agg_mean'] <= frame['agg_max']))

        trial = read_trial_csv(os.path.join(self.out, 'trial_1.csv'))
        self.assertEqual(trial.trial, 1)
        self.assertEqual(list(pd.read_csv(os.path.join(self.out, 'trial_1.csv')).columns),
                         TRIAL_COLUMNS)
        np.testing.assert_allclose(trial.mean_returns, curve.trial_returns[:, 1], rtol=1e-8)

    def test_single_trial(self):
        curve = run_experiment(tiny_config(self.out, trials=1, checkpoint_interval=0))
        np.testing.assert_array_equal(curve.agg_min, curve.agg_mean)
        np.testing.assert_array_equal(curve.agg_max, curve.agg_mean)
        self.assertEqual(os.listdir(os.path.join(self.out, 'checkpoints')), [])

    def test_byte_identical_logs(self):
        other = tempfile.TemporaryDirectory()
        self.addCleanup(other.cleanup)
        run_experiment(tiny_config(self.out))
        run_experiment(tiny_config(other.name))
        for name in ['trial_0.csv', 'trial_1.csv', 'curve.csv', 'trial_0.ckpt']:
            self.assertEqual(read_bytes(os.path.join(self.out, name)),
                             read_bytes(os.path.join(other.name, name)), name)

    def test_aggregate_runs(self):
        run_experiment(tiny_config(self.out))
        written = read_bytes(os.path.join(self.out, 'curve.csv'))
        aggregate_runs(self.out)
        self.assertEqual(read_bytes(os.path.join(self.out, 'curve.csv')), written)

    def test_aggregate_empty_directory(self):
        self.assertRaises(ConfigurationError, aggregate_runs, self.out)

    def test_campaign(self):
        config = tiny_config(self.out, trials=1, checkpoint_interval=0)
        curves = run_campaign(config, ['central-critic', 'min-health'])
        self.assertEqual(list(curves), ['central-critic', 'min-health'])
        frame = pd.read_csv(os.path.join(self.out, 'campaign.csv'))
        self.assertEqual(list(frame.columns), ['variant'] + CURVE_COLUMNS)
        alone = run_experiment(config._replace(variant='min-health',
                                               output_dir=os.path.join(self.out, 'alone')))
        self.assertEqual(curves['min-health'].agg_mean.tobytes(), alone.agg_mean.tobytes())
        self.assertRaises(ConfigurationError, run_campaign, config, ['min-health'] * 2)
        self.assertRaises(ConfigurationError, run_campaign, config, [])

    def test_tabular_model_is_not_trainable(self):
        self.assertRaises(ConfigurationError, make_experiment_env,
                          tiny_config(self.out, env='tabular-toy'))


class TestEvaluatePolicy(unittest.TestCase):
    def setUp(self):
        self.env = make_env('coop-nav', n_agents=3)
        rng = np.random.default_rng(0)
        self.checkpoint = Checkpoint(
            policy_init(self.env.observation_dim, self.env.action_dim, rng),
            critic_init(self.env.state_dim, rng, hidden=(8,)), 3, 'coop-nav')

    def test_no_episodes(self):
        result = evaluate_policy(self.checkpoint, self.env, 0)
        self.assertTrue(np.isnan(result.mean_return))
        self.assertEqual(len(result.returns), 0)

    def test_environment_mismatch(self):
        self.assertRaises(ConfigurationError, evaluate_policy, self.checkpoint,
                          make_env('coop-nav', n_agents=4), 1)

    def test_deterministic(self):
        first = evaluate_policy(self.checkpoint, self.env, 3, seed=1)
        second = evaluate_policy(self.checkpoint, self.env, 3, seed=1)
        self.assertEqual(first.returns.tobytes(), second.returns.tobytes())
        self.assertEqual(first.mean_return, first.returns.mean())

    def test_untrained_policy_is_close_to_random(self):
        untrained = evaluate_policy(self.checkpoint, self.env, 200, seed=2).returns
        uniform = random_policy_returns(self.env, 200, seed=3)
        standard_error = np.sqrt(untrained.var() / len(untrained) +
                                 uniform.var() / len(uniform))
        self.assertLess(abs(untrained.mean() - uniform.mean()), 3 * standard_error)


def main():
    unittest.main()


if __name__ == '__main__':
    main()
