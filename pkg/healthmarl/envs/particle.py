import logging
from collections import namedtuple
from typing import NamedTuple, Optional

import numpy as np

from ..core import (DecPomdpEnvironment, HealthVector, JointAction, JointObservation,
                    JointState)
from ..utils import ConfigurationError, EpisodeFinishedError, as_seed_sequence

# observation layout shared by every particle scenario
VELOCITY = slice(0, 2)
POSITION = slice(2, 4)
HEALTH = 4


class ParticleWorldConfig(NamedTuple):
    scenario: str = 'hazardous-nav'
    n_agents: int = 4
    world_halfwidth: float = 1.0
    dt: float = 0.1
    damping: float = 0.25
    max_force: float = 1.0
    n_landmarks: Optional[int] = None
    hazard: bool = True
    hazard_radius: float = 0.25
    p_fail: float = 0.3
    comm_radius: Optional[float] = None
    terminals: tuple = ((-1.0, 0.0), (1.0, 0.0))
    episode_length: int = 50

    @classmethod
    def from_dict(cls, params):
        ''' Inverse of _asdict after a JSON round trip (lists back to tuples). '''
        unknown = set(params) - set(cls._fields)
        if unknown:
            raise ConfigurationError('unknown world parameters {}'.format(sorted(unknown)))
        params = dict(params)
        if 'terminals' in params:
            params['terminals'] = tuple(tuple(float(x) for x in t)
                                        for t in params['terminals'])
        return cls(**params).validate()

    def validate(self):
        if self.n_agents < 1:
            raise ConfigurationError('n_agents must be positive, got {}'.format(self.n_agents))
        if self.world_halfwidth <= 0 or self.dt <= 0 or self.max_force < 0:
            raise ConfigurationError('world_halfwidth and dt must be positive and '
                                     'max_force nonnegative')
        if not 0.0 <= self.damping < 1.0:
            raise ConfigurationError('damping must lie in [0, 1), got {}'.format(self.damping))
        if self.hazard_radius < 0:
            raise ConfigurationError('hazard_radius must be nonnegative')
        if not 0.0 <= self.p_fail <= 1.0:
            raise ConfigurationError('p_fail must lie in [0, 1], got {}'.format(self.p_fail))
        if self.comm_radius is not None and self.comm_radius < 0:
            raise ConfigurationError('comm_radius must be nonnegative')
        if self.n_landmarks is not None and self.n_landmarks < 1:
            raise ConfigurationError('n_landmarks must be positive')
        if self.episode_length < 1:
            raise ConfigurationError('episode_length must be at least 1')
        return self


ParticleView = namedtuple('ParticleView',
                          'positions velocities landmarks hazard revealed memory')


class ParticleWorld(DecPomdpEnvironment):
    ''' Point masses on a plane with velocity damping and one hazard.

    The non-health state vector is laid out as
    positions | velocities | landmarks | hazard | revealed | memory,
    where memory holds the frozen observation of each terminated agent.
    '''

    def __init__(self, config):
        self.config = config.validate()
        self.n_agents = config.n_agents
        self.n_landmarks = self._landmark_count()
        self.action_dim = 2
        self.action_low = -1.0
        self.action_high = 1.0
        self.episode_length = config.episode_length
        self.observation_dim = 2 * self.n_landmarks + 2 * self.n_agents + 6

        n, L = self.n_agents, self.n_landmarks
        sizes = [('positions', 2 * n), ('velocities', 2 * n), ('landmarks', 2 * L),
                 ('hazard', 2), ('revealed', 1), ('memory', n * self.observation_dim)]
        self._slices = {}
        offset = 0
        for name, size in sizes:
            self._slices[name] = slice(offset, offset + size)
            offset += size
        self.nonhealth_dim = offset
        self._physical_dim = self._slices['memory'].start
        self.state_dim = n + self._physical_dim + 1

    @property
    def name(self):
        return self.config.scenario

    def _landmark_count(self):
        raise NotImplementedError

    def _place_landmarks(self, rng):
        raise NotImplementedError

    def _place_hazard(self, rng, landmarks):
        raise NotImplementedError

    def reward(self, state):
        raise NotImplementedError

    def unpack(self, nonhealth):
        n, L = self.n_agents, self.n_landmarks
        nonhealth = np.asarray(nonhealth)
        s = self._slices
        return ParticleView(
            positions=nonhealth[s['positions']].reshape(n, 2),
            velocities=nonhealth[s['velocities']].reshape(n, 2),
            landmarks=nonhealth[s['landmarks']].reshape(L, 2),
            hazard=nonhealth[s['hazard']],
            revealed=bool(nonhealth[s['revealed']][0]),
            memory=nonhealth[s['memory']].reshape(n, self.observation_dim))

    def pack(self, view):
        return np.concatenate([np.ravel(view.positions), np.ravel(view.velocities),
                               np.ravel(view.landmarks), np.ravel(view.hazard),
                               [float(view.revealed)], np.ravel(view.memory)])

    def reset(self, seed=None):
        rng = np.random.default_rng(as_seed_sequence(seed))
        hw = self.config.world_halfwidth
        positions = rng.uniform(-hw, hw, size=(self.n_agents, 2))
        landmarks = self._place_landmarks(rng)
        hazard = self._place_hazard(rng, landmarks)
        view = ParticleView(positions, np.zeros((self.n_agents, 2)), landmarks, hazard,
                            False, np.zeros((self.n_agents, self.observation_dim)))
        state = JointState(np.ones(self.n_agents), self.pack(view), 0)
        return state, self.observe(state)

    def _live_observations(self, view):
        n = self.n_agents
        observations = np.zeros((n, self.observation_dim))
        observations[:, VELOCITY] = view.velocities
        observations[:, POSITION] = view.positions
        observations[:, HEALTH] = 1.0
        offset = HEALTH + 1
        relative = view.landmarks[None, :, :] - view.positions[:, None, :]
        observations[:, offset:offset + 2 * self.n_landmarks] = relative.reshape(n, -1)
        offset += 2 * self.n_landmarks
        for i in range(n):
            others = np.delete(view.positions, i, axis=0) - view.positions[i]
            observations[i, offset:offset + 2 * (n - 1)] = others.ravel()
        offset += 2 * (n - 1)
        if view.revealed:
            observations[:, offset] = 1.0
            observations[:, offset + 1:offset + 3] = view.hazard[None, :] - view.positions
        return observations

    def _observation_array(self, state):
        view = self.unpack(state.nonhealth)
        observations = self._live_observations(view)
        dead = state.health.values == 0.0
        observations[dead] = view.memory[dead]
        return observations

    def observe(self, state):
        return JointObservation(self._observation_array(state)).check(
            self.n_agents, self.observation_dim)

    def constrict_observation(self, observation):
        observation = np.array(observation, dtype=float)
        observation[..., VELOCITY] = 0.0
        observation[..., HEALTH] = 0.0
        return observation

    def _freeze(self, view, observations, newly_dead):
        velocities = np.array(view.velocities)
        velocities[newly_dead] = 0.0
        memory = np.array(view.memory)
        memory[newly_dead] = self.constrict_observation(observations[newly_dead])
        return view._replace(velocities=velocities, memory=memory)

    def terminate(self, state, mask):
        ''' Sets the masked agents to zero health, stops them and freezes
        their current observation.
        '''
        newly_dead = np.asarray(mask, dtype=bool) & (state.health.values > 0.0)
        view = self._freeze(self.unpack(state.nonhealth), self._observation_array(state),
                            newly_dead)
        health = np.where(newly_dead, 0.0, state.health.values)
        return JointState(health, self.pack(view), state.time)

    def _inside_hazard(self, positions, hazard):
        if not self.config.hazard:
            return np.zeros(len(positions), dtype=bool)
        return np.linalg.norm(positions - hazard, axis=1) <= self.config.hazard_radius

    def hazard_termination(self, state, rng):
        ''' Each live agent inside the hazard radius is terminated with
        probability p_fail, independently.

        One uniform draw is consumed per agent whatever the health or
        position, so the stream stays aligned across counterfactual runs.
        '''
        view = self.unpack(state.nonhealth)
        draws = rng.random(self.n_agents)
        inside = self._inside_hazard(view.positions, view.hazard)
        health = state.health.values
        dies = (health > 0.0) & inside & (draws < self.config.p_fail)
        return HealthVector(np.where(dies, 0.0, health))

    def step(self, state, sampled_joint_action, rng):
        if state.time >= self.episode_length:
            raise EpisodeFinishedError('episode finished at t = {}'.format(state.time))
        sampled_joint_action = np.asarray(sampled_joint_action, dtype=float)
        if sampled_joint_action.shape != (self.n_agents, self.action_dim):
            raise ValueError('expected joint action of shape {}, got {}'.format(
                (self.n_agents, self.action_dim), sampled_joint_action.shape))
        executed = JointAction.executed(sampled_joint_action, state.health,
                                        self.action_low, self.action_high).actions
        observations = self._observation_array(state)
        view = self.unpack(state.nonhealth)
        alive = state.health.values > 0.0
        cfg = self.config

        velocities = view.velocities * (1.0 - cfg.damping) + executed * cfg.max_force * cfg.dt
        velocities = np.where(alive[:, None], velocities, 0.0)
        positions = view.positions + velocities * cfg.dt
        view = view._replace(positions=positions, velocities=velocities)

        moved = JointState(state.health, self.pack(view), state.time)
        health = self.hazard_termination(moved, rng).values
        revealed = view.revealed or bool(np.any(self._inside_hazard(positions, view.hazard)))
        newly_dead = alive & (health == 0.0)
        if np.any(newly_dead):
            logging.debug('{}: agents {} terminated at t = {}'.format(
                self.name, np.flatnonzero(newly_dead).tolist(), state.time + 1))
        view = self._freeze(view._replace(revealed=revealed), observations, newly_dead)

        next_state = JointState(health, self.pack(view), state.time + 1)
        reward = self.reward(next_state)
        done = next_state.time == self.episode_length
        return next_state, self.observe(next_state), reward, done

    def physical_state(self, state):
        return np.asarray(state.nonhealth[:self._physical_dim])

    def critic_features(self, health, nonhealth, time):
        ''' Joint-state input of the central critic: health, physical state
        and the elapsed fraction of the episode. Broadcasts over leading axes.
        '''
        health = np.asarray(health, dtype=float)
        nonhealth = np.asarray(nonhealth, dtype=float)[..., :self._physical_dim]
        fraction = np.broadcast_to(np.asarray(time, dtype=float) / self.episode_length,
                                   health.shape[:-1])[..., None]
        return np.concatenate([health, nonhealth, fraction], axis=-1)
