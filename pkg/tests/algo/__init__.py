import numpy as np

from healthmarl.algo import TrainConfig
from healthmarl.envs import HazardousNavigation, world_config


def navigation(n_agents=2, **overrides):
    return HazardousNavigation(world_config('hazardous-nav', n_agents=n_agents, **overrides))


def deadly_navigation(n_agents=3, p_fail=0.5, episode_length=6):
    ''' Every agent starts inside the hazard radius. '''
    return navigation(n_agents=n_agents, hazard_radius=3.0, p_fail=p_fail,
                      episode_length=episode_length)


class ZeroRewardNavigation(HazardousNavigation):
    def reward(self, state):
        return 0.0


class NanRewardNavigation(HazardousNavigation):
    def reward(self, state):
        return np.nan


def small_config(**overrides):
    params = dict(episodes_per_batch=4, total_episodes=8, epochs=2, minibatches=2,
                  policy_hidden=(8,), critic_hidden=(8, 8), local_critic_hidden=(8,))
    params.update(overrides)
    return TrainConfig(**params)
