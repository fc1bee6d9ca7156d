from .particle import ParticleWorldConfig, ParticleWorld
from .navigation import HazardousNavigation, navigation_reward
from .communication import HazardousCommunication, communication_reward
from .tabular import (TabularDecPomdp, TabularSoftmaxPolicy, Trajectory, TrajectoryTable,
                      check_health_structure, default_tabular_model, enumerate_trajectories,
                      exact_state_values, random_tabular_model, simulate_returns,
                      tabular_enumerate, trajectory_probabilities)
from ..utils import ConfigurationError

SCENARIOS = ['hazardous-nav', 'hazardous-comm', 'coop-nav', 'tabular-toy']

_DEFAULTS = {
    'hazardous-nav': dict(n_agents=4),
    'hazardous-comm': dict(n_agents=10),
    'coop-nav': dict(n_agents=3, hazard=False, p_fail=0.0),
}


def world_config(name, **overrides):
    if name not in _DEFAULTS:
        raise ConfigurationError('unknown particle scenario {!r}'.format(name))
    params = dict(_DEFAULTS[name])
    params.update({k: v for k, v in overrides.items() if v is not None})
    if name == 'coop-nav':
        params.update(hazard=False, p_fail=0.0)
    return ParticleWorldConfig(scenario=name, **params).validate()


def make_env(name, **overrides):
    ''' Builds a scenario by name; None-valued overrides keep the defaults. '''
    if name not in SCENARIOS:
        raise ConfigurationError('unknown scenario {!r}, expected one of {}'.format(
            name, SCENARIOS))
    if name == 'tabular-toy':
        return default_tabular_model()
    return make_world(world_config(name, **overrides))


def make_world(config):
    ''' The environment for a ParticleWorldConfig, e.g. one read back from a
    checkpoint header.
    '''
    if config.scenario not in _DEFAULTS:
        raise ConfigurationError('unknown particle scenario {!r}'.format(config.scenario))
    if config.scenario == 'hazardous-comm':
        return HazardousCommunication(config)
    return HazardousNavigation(config)


def reset(config, seed=None):
    ''' Resets the world described by a ParticleWorldConfig. '''
    return make_world(config).reset(seed)
