import os
import tempfile
import unittest

from healthmarl.algo import TrainConfig
from healthmarl.harness import ExperimentConfig, dump_config, load_config, parse_config
from healthmarl.utils import ConfigurationError

CONFIG = '''
# coop-nav comparison
env = coop-nav
n-agents = 3
variant = central-critic   # shared advantage
normalize_advantages = yes
policy_hidden = 16, 16
actor_lr = 3e-4
crash_checkpoint = none
'''


class TestParseConfig(unittest.TestCase):
    def test_defaults(self):
        config = parse_config('')
        self.assertEqual(config, ExperimentConfig())
        self.assertEqual(config.train_config, TrainConfig())
        self.assertEqual((config.env, config.trials, config.seed), ('hazardous-nav', 4, 0))

    def test_values(self):
        config = parse_config(CONFIG)
        self.assertEqual(config.env, 'coop-nav')
        self.assertEqual(config.n_agents, 3)
        self.assertEqual(config.variant, 'central-critic')
        self.assertIs(config.normalize_advantages, True)
        self.assertEqual(config.policy_hidden, (16, 16))
        self.assertEqual(config.actor_lr, 3e-4)
        self.assertIsNone(config.crash_checkpoint)
        self.assertEqual(config.train_config.variant, 'central-critic')
        self.assertEqual(config.world_overrides['n_agents'], 3)

    def test_overrides(self):
        self.assertEqual(parse_config('seed = 3', seed=7).seed, 7)
        self.assertEqual(parse_config('seed = 3', seed=None).seed, 3)

    def test_errors(self):
        for text in ['colour = blue', 'trials = many', 'trials = 0', 'env = pong',
                     'p_fail = 2.0', 'variant = ppo', 'normalize_advantages = maybe',
                     'no separator']:
            self.assertRaises(ConfigurationError, parse_config, text)
        self.assertRaises(ConfigurationError, parse_config, '', colour='blue')


class TestConfigFiles(unittest.TestCase):
    def test_round_trip(self):
        config = parse_config(CONFIG, seed=11, total_episodes=1024)
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'config.txt')
            dump_config(config, path)
            self.assertEqual(load_config(path), config)

    def test_without_file(self):
        self.assertEqual(load_config(None, trials=2).trials, 2)


def main():
    unittest.main()


if __name__ == '__main__':
    main()
