"""Dec-POMDP value types with first-class system health.

A joint state decomposes as s = (h, p): the per-agent health vector h and the
non-health remainder p. Health lies in [0, 1]; an agent at 0 is terminated
and stays terminated for the rest of the episode.
"""
import abc
import logging
from collections import namedtuple

import numpy as np

DEFAULT_H_MIN = 0.0


def _frozen(X, dtype=float):
    X = np.array(X, dtype=dtype)
    X.flags.writeable = False
    return X


class HealthVector(namedtuple('HealthVector', 'values')):
    __slots__ = ()

    def __new__(cls, values):
        values = _frozen(values)
        if values.ndim != 1:
            raise ValueError('health must be a vector, got shape {}'.format(values.shape))
        if np.any(np.isnan(values)) or np.any(values < 0.0) or np.any(values > 1.0):
            raise ValueError('health values must lie in [0, 1], got {}'.format(values))
        return super(HealthVector, cls).__new__(cls, values)

    @property
    def alive(self):
        return self.values > 0.0

    def dead_revivals(self, following):
        ''' Agents dead here but with positive health in `following`.
        '''
        following = following.values if isinstance(following, HealthVector) else following
        return np.flatnonzero((self.values == 0.0) & (np.asarray(following) > 0.0))

    def __eq__(self, other):
        return isinstance(other, HealthVector) and np.array_equal(self.values, other.values)

    def __ne__(self, other):
        return not self == other

    __hash__ = None


class JointState(namedtuple('JointState', 'health nonhealth time')):
    __slots__ = ()

    def __new__(cls, health, nonhealth, time=0):
        if not isinstance(health, HealthVector):
            health = HealthVector(health)
        nonhealth = _frozen(nonhealth)
        if nonhealth.ndim != 1:
            raise ValueError('nonhealth must be a vector, got shape {}'.format(nonhealth.shape))
        if int(time) != time or time < 0:
            raise ValueError('time must be a nonnegative integer, got {}'.format(time))
        return super(JointState, cls).__new__(cls, health, nonhealth, int(time))

    @property
    def n_agents(self):
        return len(self.health.values)

    def to_vector(self):
        return np.concatenate([self.health.values, self.nonhealth, [float(self.time)]])

    @classmethod
    def from_vector(cls, vector, n_agents):
        vector = np.asarray(vector, dtype=float)
        return cls(vector[:n_agents], vector[n_agents:-1], int(vector[-1]))

    def __eq__(self, other):
        return (isinstance(other, JointState) and self.health == other.health
                and self.time == other.time
                and np.array_equal(self.nonhealth, other.nonhealth))

    def __ne__(self, other):
        return not self == other

    __hash__ = None


class JointAction(namedtuple('JointAction', 'actions')):
    __slots__ = ()

    def __new__(cls, actions):
        actions = _frozen(actions)
        if actions.ndim != 2:
            raise ValueError('joint action must be (n_agents, action_dim)')
        return super(JointAction, cls).__new__(cls, actions)

    @classmethod
    def executed(cls, sampled, health, low=-1.0, high=1.0):
        ''' Clamps the sampled joint action to the box and constricts it by
        health; this is what the world actually applies.
        '''
        sampled = np.clip(np.asarray(sampled, dtype=float), low, high)
        health = health.values if isinstance(health, HealthVector) else health
        return cls(constrict_actions(sampled, health))


class JointObservation(namedtuple('JointObservation', 'observations')):
    __slots__ = ()

    def __new__(cls, observations):
        observations = _frozen(observations)
        if observations.ndim != 2:
            raise ValueError('joint observation must be (n_agents, observation_dim)')
        return super(JointObservation, cls).__new__(cls, observations)

    @property
    def n_agents(self):
        return self.observations.shape[0]

    @property
    def observation_dim(self):
        return self.observations.shape[1]

    def check(self, n_agents, observation_dim):
        ''' Returns self when every agent has an observation of the
        environment's fixed dimensionality.
        '''
        if self.observations.shape != (n_agents, observation_dim):
            raise ValueError('expected observations of shape {}, got {}'.format(
                (n_agents, observation_dim), self.observations.shape))
        return self


class ObservationActionHistory(namedtuple('ObservationActionHistory',
                                          'observations actions')):
    ''' Local history tau_i of one agent. The last observation may still be
    waiting for its action.
    '''
    __slots__ = ()

    def __new__(cls, observations=(), actions=()):
        observations = tuple(_frozen(o) for o in observations)
        actions = tuple(_frozen(a) for a in actions)
        if len(actions) not in (len(observations), len(observations) - 1):
            raise ValueError('{} actions cannot follow {} observations'.format(
                len(actions), len(observations)))
        return super(ObservationActionHistory, cls).__new__(cls, observations, actions)

    @property
    def length(self):
        return len(self.observations)

    @property
    def awaiting_action(self):
        return len(self.actions) < len(self.observations)

    def observe(self, observation):
        if self.awaiting_action:
            raise ValueError('the previous observation has no action yet')
        return ObservationActionHistory(self.observations + (observation,), self.actions)

    def act(self, action):
        if not self.awaiting_action:
            raise ValueError('no observation is waiting for an action')
        return ObservationActionHistory(self.observations, self.actions + (action,))


def constrict_action(proposed, health):
    ''' Binary-health constriction: a terminated agent can only execute the
    zero vector.
    '''
    proposed = np.asarray(proposed, dtype=float)
    if health > 0.0:
        return proposed
    return np.zeros_like(proposed)


def constrict_actions(actions, health):
    ''' Elementwise constrict_action over (..., n_agents, action_dim). '''
    alive = np.asarray(health)[..., None] > 0.0
    return np.where(alive, actions, 0.0)


def joint_log_prob(local_log_probs):
    ''' Independent local policies factorise the joint one; the last axis
    indexes agents.
    '''
    return np.sum(local_log_probs, axis=-1)


def counterfactual_health(health, i, h_min=DEFAULT_H_MIN):
    health = np.array(health, dtype=float)
    n = health.shape[-1]
    if not 0 <= i < n:
        raise ValueError('agent index {} out of range for {} agents'.format(i, n))
    health[..., i] = h_min
    return health


def with_health(state, i, value):
    if not 0 <= i < state.n_agents:
        raise ValueError('agent index {} out of range for {} agents'.format(
            i, state.n_agents))
    health = np.array(state.health.values)
    health[i] = value
    return JointState(health, state.nonhealth, state.time)


def make_counterfactual_state(state, i, h_min=DEFAULT_H_MIN):
    ''' s^{not i}: the same joint state with agent i at minimum health. '''
    return with_health(state, i, h_min)


class DecPomdpEnvironment(abc.ABC):
    ''' Contract of every simulated world.

    step() clamps and constricts sampled actions itself, so callers always
    pass what the policy sampled. terminate() is how health reaches zero; it
    must also zero the agent's velocity and freeze its observation.
    reset(), step() and observe() hand observations back as a JointObservation.
    '''

    n_agents = None
    observation_dim = None
    action_dim = None
    state_dim = None
    episode_length = None
    action_low = -1.0
    action_high = 1.0

    @abc.abstractmethod
    def reset(self, seed=None):
        pass

    @abc.abstractmethod
    def step(self, state, sampled_joint_action, rng):
        pass

    @abc.abstractmethod
    def observe(self, state):
        pass

    @abc.abstractmethod
    def terminate(self, state, mask):
        pass

    @abc.abstractmethod
    def physical_state(self, state):
        ''' Non-health state without observation memory. '''

    @abc.abstractmethod
    def constrict_observation(self, observation):
        pass

    @abc.abstractmethod
    def critic_features(self, health, nonhealth, time):
        pass


class HealthPropertyReport(namedtuple('HealthPropertyReport', [
        'min_health', 'reachable_set', 'available_actions', 'observable_set',
        'counterexamples', 'n_transitions'])):
    __slots__ = ()

    @property
    def passed(self):
        return bool(self.min_health and self.reachable_set and self.available_actions
                    and self.observable_set)


_MAX_COUNTEREXAMPLES = 10


def validate_health_properties(env, num_samples=10000, seed=0, force_probability=0.05):
    ''' Monte-Carlo check of the four health properties on `num_samples`
    transitions under uniformly random actions.

    Deaths are also forced at random so that every property is exercised
    even when the hazard is rarely visited. Failures are collected, never
    raised.
    '''
    rng = np.random.default_rng(seed)
    counterexamples = {'min_health': [], 'reachable_set': [],
                       'available_actions': [], 'observable_set': []}

    def fail(name, **detail):
        if len(counterexamples[name]) < _MAX_COUNTEREXAMPLES:
            counterexamples[name].append(detail)

    n_transitions = 0
    episode = 0
    health_levels = np.array([1.0, 0.75, 0.5, 0.25, 0.0])
    while n_transitions < num_samples:
        state, observations = env.reset(seed=int(rng.integers(2**31)))
        last_live = np.array(observations.observations, dtype=float)
        done = False
        while not done and n_transitions < num_samples:
            alive = state.health.values > 0.0
            if np.any(alive) and rng.random() < force_probability:
                mask = np.zeros(env.n_agents, dtype=bool)
                mask[rng.choice(np.flatnonzero(alive))] = True
                state = env.terminate(state, mask)
                observations = env.observe(state)
                for i in np.flatnonzero(mask & (state.health.values == 0.0)):
                    if not np.array_equal(observations.observations[i],
                                          env.constrict_observation(last_live[i])):
                        fail('observable_set', episode=episode, time=state.time, agent=int(i),
                             detail='forced termination does not freeze the last live observation')

            actions = rng.uniform(env.action_low, env.action_high,
                                  size=(env.n_agents, env.action_dim))
            step_seed = int(rng.integers(2**31))
            next_state, next_observations, _, done = env.step(
                state, actions, np.random.default_rng(step_seed))
            n_transitions += 1

            for i in state.health.dead_revivals(next_state.health):
                fail('min_health', episode=episode, time=state.time, agent=int(i),
                     before=0.0, after=float(next_state.health.values[i]))

            # available actions are the fixed points of constriction
            for a in actions:
                for hi, lo in zip(health_levels[:-1], health_levels[1:]):
                    low = constrict_action(a, lo)
                    if (np.any(low < env.action_low) or np.any(low > env.action_high)
                            or not np.array_equal(constrict_action(low, hi), low)):
                        fail('available_actions', action=a.tolist(), high=hi, low=lo)

            reached = env.physical_state(next_state)
            for i in np.flatnonzero(state.health.values == 0.0):
                witness = with_health(state, i, 1.0)
                witness_actions = np.array(actions)
                witness_actions[i] = 0.0
                witness_next, _, _, _ = env.step(
                    witness, witness_actions, np.random.default_rng(step_seed))
                others = np.arange(env.n_agents) != i
                if not (np.array_equal(env.physical_state(witness_next), reached) and
                        np.array_equal(witness_next.health.values[others],
                                       next_state.health.values[others])):
                    fail('reachable_set', episode=episode, time=state.time, agent=int(i),
                         detail='successor is not reachable from the full-health state')

            for i in range(env.n_agents):
                if next_state.health.values[i] > 0.0:
                    last_live[i] = next_observations.observations[i]
                elif not np.array_equal(next_observations.observations[i],
                                        env.constrict_observation(last_live[i])):
                    fail('observable_set', episode=episode, time=next_state.time, agent=int(i),
                         detail='terminated agent observes outside its constricted set')

            state, observations = next_state, next_observations
        episode += 1

    report = HealthPropertyReport(
        min_health=not counterexamples['min_health'],
        reachable_set=not counterexamples['reachable_set'],
        available_actions=not counterexamples['available_actions'],
        observable_set=not counterexamples['observable_set'],
        counterexamples=counterexamples,
        n_transitions=n_transitions)
    logging.info('health properties over {} transitions: min_health={}, reachable_set={}, '
                 'available_actions={}, observable_set={}'.format(
                     n_transitions, report.min_health, report.reachable_set,
                     report.available_actions, report.observable_set))
    return report
