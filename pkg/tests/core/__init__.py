import numpy as np

from healthmarl.envs import HazardousNavigation, world_config


def navigation(n_agents=2, **overrides):
    return HazardousNavigation(world_config('hazardous-nav', n_agents=n_agents, **overrides))


class RevivingNavigation(HazardousNavigation):
    ''' Faulty world: every agent is back at full health after each step. '''

    def step(self, state, sampled_joint_action, rng):
        next_state, observations, reward, done = super(RevivingNavigation, self).step(
            state, sampled_joint_action, rng)
        revived = next_state._replace(health=type(next_state.health)(
            np.ones(self.n_agents)))
        return revived, self.observe(revived), reward, done


class ImmortalNavigation(HazardousNavigation):
    ''' Health frozen at 1: nothing can terminate an agent. '''

    def terminate(self, state, mask):
        return state
