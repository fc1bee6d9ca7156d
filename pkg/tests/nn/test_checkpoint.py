import json
import os
import tempfile
import unittest
import numpy as np

from healthmarl.envs import ParticleWorldConfig, make_world, world_config
from healthmarl.nn import critic_init, load_checkpoint, policy_init, save_checkpoint
from healthmarl.utils import ConfigurationError


class TestCheckpoint(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(0)
        self.policy = policy_init(10, 2, rng)
        self.critic = critic_init(21, rng, hidden=(16, 16))
        self.critic = self.critic._replace(mlp=self.critic.mlp._replace(
            values=rng.normal(size=self.critic.mlp.spec.n_params)))
        self.directory = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.directory.name, 'model.ckpt')

    def tearDown(self):
        self.directory.cleanup()

    def test_round_trip_is_bit_exact(self):
        save_checkpoint(self.path, self.policy, self.critic, n_agents=3,
                        scenario='hazardous-nav')
        loaded = load_checkpoint(self.path)
        self.assertEqual(loaded.n_agents, 3)
        self.assertEqual(loaded.scenario, 'hazardous-nav')
        self.assertEqual(loaded.policy.mean.spec, self.policy.mean.spec)
        self.assertEqual(loaded.critic.mlp.spec, self.critic.mlp.spec)
        self.assertEqual(loaded.critic.kind, 'central')
        self.assertEqual(loaded.policy.flatten().tobytes(), self.policy.flatten().tobytes())
        self.assertEqual(loaded.critic.mlp.values.tobytes(),
                         self.critic.mlp.values.tobytes())

    def test_world_parameters_round_trip(self):
        world = world_config('hazardous-comm', n_agents=3, episode_length=5, p_fail=1.0,
                             comm_radius=0.4)
        save_checkpoint(self.path, self.policy, self.critic, n_agents=3,
                        scenario='hazardous-comm', world=world)
        loaded = load_checkpoint(self.path)
        rebuilt = ParticleWorldConfig.from_dict(loaded.world)
        self.assertEqual(rebuilt, world)
        self.assertEqual(make_world(rebuilt).episode_length, 5)

    def test_world_is_optional(self):
        save_checkpoint(self.path, self.policy, self.critic, n_agents=3)
        self.assertIsNone(load_checkpoint(self.path).world)
        self.assertRaises(ConfigurationError, ParticleWorldConfig.from_dict,
                          {'scenario': 'hazardous-nav', 'gravity': 9.8})

    def test_header(self):
        save_checkpoint(self.path, self.policy, self.critic, n_agents=3)
        with open(self.path, 'rb') as f:
            header = json.loads(f.readline().decode('utf-8'))
            payload = f.read()
        self.assertEqual(header['version'], 1)
        self.assertEqual(header['policy']['widths'], [10, 64, 64, 2])
        self.assertEqual(header['tensors'][0], {'name': 'policy.W0', 'shape': [10, 64]})
        expected = self.policy.mean.spec.n_params + 2 + self.critic.mlp.spec.n_params
        self.assertEqual(len(payload), 8 * expected)
        np.testing.assert_array_equal(np.frombuffer(payload[:80], dtype='<f8'),
                                      self.policy.mean.values[:10])

    def test_truncated_file(self):
        save_checkpoint(self.path, self.policy, self.critic, n_agents=3)
        with open(self.path, 'rb') as f:
            content = f.read()
        with open(self.path, 'wb') as f:
            f.write(content[:-8])
        self.assertRaises(ConfigurationError, load_checkpoint, self.path)

    def test_not_a_checkpoint(self):
        with open(self.path, 'wb') as f:
            f.write(b'hello\n')
        self.assertRaises(ConfigurationError, load_checkpoint, self.path)


def main():
    unittest.main()


if __name__ == '__main__':
    main()
