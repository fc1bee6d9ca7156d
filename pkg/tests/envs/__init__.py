import numpy as np

from healthmarl.core import JointState
from healthmarl.envs import (HazardousCommunication, HazardousNavigation,
                             TabularDecPomdp, world_config)


def navigation(n_agents=2, **overrides):
    return HazardousNavigation(world_config('hazardous-nav', n_agents=n_agents, **overrides))


def communication(n_agents=3, **overrides):
    return HazardousCommunication(world_config('hazardous-comm', n_agents=n_agents,
                                               **overrides))


def place(env, state, positions=None, velocities=None, hazard=None, health=None):
    ''' Copy of state with some of its physical fields replaced. '''
    view = env.unpack(state.nonhealth)
    if positions is not None:
        view = view._replace(positions=np.asarray(positions, dtype=float))
    if velocities is not None:
        view = view._replace(velocities=np.asarray(velocities, dtype=float))
    if hazard is not None:
        view = view._replace(hazard=np.asarray(hazard, dtype=float))
    health = state.health.values if health is None else health
    return JointState(health, env.pack(view), state.time)


def chain_model(n_agents=1, n_actions=1, horizon=1, rewards=None):
    ''' One all-healthy state looping onto itself; every joint action is
    available and observations are constant.
    '''
    n_joint = n_actions ** n_agents
    rewards = np.zeros((1, n_joint)) if rewards is None else np.reshape(rewards, (1, n_joint))
    return TabularDecPomdp(
        initial=np.ones(1),
        transitions=np.ones((1, n_joint, 1)),
        rewards=np.asarray(rewards, dtype=float),
        health=np.ones((1, n_agents)),
        observations=np.zeros((n_agents, 1), dtype=int),
        available=np.ones((1, n_agents, n_actions), dtype=bool),
        base=np.zeros(1, dtype=int),
        horizon=horizon,
        n_observations=1).validate()
