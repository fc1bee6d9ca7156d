"""Small enumerable Dec-POMDPs with binary health.

States are pairs (base, health) flattened as base * 2**n + health code, so the
counterfactual "agent i terminated" state is a table lookup. Every agent sees
a deterministic observation of the state and a terminated agent only has a
singleton action set.
"""
import logging
from collections import namedtuple

import numpy as np
from scipy.special import softmax

from ..utils import ConfigurationError, EnumerationBudgetError

DEFAULT_BUDGET = int(1e7)


class TabularDecPomdp(namedtuple('TabularDecPomdp', [
        'initial', 'transitions', 'rewards', 'health', 'observations',
        'available', 'base', 'horizon', 'n_observations'])):
    ''' Enumerated model.

    Params:
        initial: (S,) initial state distribution
        transitions: (S, J, S) next-state distribution per joint action
        rewards: (S, J) joint reward
        health: (S, n) health label of every state
        observations: (n, S) observation index each agent receives
        available: (S, n, A) available action masks
        base: (S,) non-health component of every state
        horizon: number of decisions per episode
    '''
    __slots__ = ()

    @property
    def n_states(self):
        return self.transitions.shape[0]

    @property
    def n_agents(self):
        return self.health.shape[1]

    @property
    def n_actions(self):
        return self.available.shape[2]

    @property
    def joint_actions(self):
        ''' (J, n) table of local actions; agent 0 is the most significant. '''
        grids = np.indices((self.n_actions,) * self.n_agents).reshape(self.n_agents, -1)
        return grids.T

    @property
    def joint_available(self):
        ''' (S, J) mask of joint actions made of available local actions. '''
        joint = self.joint_actions
        agents = np.arange(self.n_agents)
        return np.all(self.available[:, agents, joint], axis=-1)

    @property
    def counterfactual(self):
        ''' (S, n) index of the same state with agent i at minimum health. '''
        table = np.tile(np.arange(self.n_states)[:, None], (1, self.n_agents))
        lookup = {(b, tuple(h)): s for s, (b, h) in enumerate(zip(self.base, self.health))}
        for s in range(self.n_states):
            for i in range(self.n_agents):
                health = np.array(self.health[s])
                health[i] = 0.0
                table[s, i] = lookup.get((self.base[s], tuple(health)), s)
        return table

    def validate(self):
        joint_available = self.joint_available
        sums = self.transitions.sum(axis=-1)
        if np.any(np.abs(sums[joint_available] - 1.0) > 1e-12):
            raise ConfigurationError('transition rows must sum to 1')
        if abs(self.initial.sum() - 1.0) > 1e-12:
            raise ConfigurationError('initial distribution must sum to 1')
        if not np.all(self.available.any(axis=-1)):
            raise ConfigurationError('every agent needs at least one available action')
        if check_health_structure(self):
            raise ConfigurationError('transitions revive terminated agents')
        return self


def check_health_structure(model):
    ''' (state, joint action, next state, agent) tuples where a terminated
    agent has positive health after a transition of positive probability.
    '''
    violations = []
    dead = model.health == 0.0
    for s, j, s_next in zip(*np.nonzero(model.transitions > 0.0)):
        for i in np.flatnonzero(dead[s] & (model.health[s_next] > 0.0)):
            violations.append((int(s), int(j), int(s_next), int(i)))
    return violations


class TabularSoftmaxPolicy(object):
    ''' One softmax per (agent, observation) over the agent's available
    actions. theta has shape (n_agents, n_observations, n_actions).
    '''

    def __init__(self, theta):
        self.theta = np.asarray(theta, dtype=float)

    def probabilities(self, model):
        ''' (S, n, A) local action probabilities in every state. '''
        agents = np.arange(model.n_agents)
        logits = self.theta[agents[None, :], model.observations.T]
        logits = np.where(model.available, logits, -np.inf)
        return softmax(logits, axis=-1)

    def joint_probabilities(self, model):
        local = self.probabilities(model)
        agents = np.arange(model.n_agents)
        return np.prod(local[:, agents, model.joint_actions], axis=-1)

    def scores(self, model):
        ''' (S, n, A, A): gradient of log pi_i(a | o_i(s)) with respect to
        theta[i, o_i(s), :], indexed by the chosen action a.
        '''
        local = self.probabilities(model)
        eye = np.eye(model.n_actions)
        return eye[None, None, :, :] - local[:, :, None, :]


def _as_policy(policy):
    if isinstance(policy, TabularSoftmaxPolicy):
        return policy
    return TabularSoftmaxPolicy(policy)


TrajectoryTable = namedtuple('TrajectoryTable',
                             'states joint_actions rewards env_probabilities')

Trajectory = namedtuple('Trajectory', 'states joint_actions rewards')


def enumerate_trajectories(model, budget=DEFAULT_BUDGET):
    ''' Every positive-probability state/joint-action path, independent of
    the policy (softmax policies put mass on every available action).
    '''
    states = np.flatnonzero(model.initial > 0.0)[:, None]
    env_probabilities = model.initial[states[:, 0]]
    joint_actions = np.zeros((len(states), 0), dtype=int)
    rewards = np.zeros((len(states), 0))
    joint_available = model.joint_available

    for t in range(model.horizon):
        current = states[:, -1]
        expand = joint_available[current][:, :, None] & (model.transitions[current] > 0.0)
        count = int(expand.sum())
        if count > budget:
            raise EnumerationBudgetError(
                'enumeration needs {} trajectories at step {}, budget is {}'.format(
                    count, t, budget))
        k, j, s_next = np.nonzero(expand)
        env_probabilities = env_probabilities[k] * model.transitions[current[k], j, s_next]
        rewards = np.hstack([rewards[k], model.rewards[current[k], j][:, None]])
        joint_actions = np.hstack([joint_actions[k], j[:, None]])
        states = np.hstack([states[k], s_next[:, None]])

    logging.debug('enumerated {} trajectories over horizon {}'.format(
        len(states), model.horizon))
    return TrajectoryTable(states, joint_actions, rewards, env_probabilities)


def trajectory_probabilities(model, policy, table):
    joint = _as_policy(policy).joint_probabilities(model)
    steps = joint[table.states[:, :-1], table.joint_actions]
    return table.env_probabilities * np.prod(steps, axis=1)


def tabular_enumerate(model, policy, budget=DEFAULT_BUDGET):
    ''' List of (trajectory, probability, return) over all trajectories. '''
    table = enumerate_trajectories(model, budget)
    probabilities = trajectory_probabilities(model, policy, table)
    returns = table.rewards.sum(axis=1)
    return [(Trajectory(table.states[k], table.joint_actions[k], table.rewards[k]),
             float(probabilities[k]), float(returns[k]))
            for k in range(len(probabilities))]


def exact_state_values(model, policy):
    ''' (horizon + 1, S) expected undiscounted return-to-go by backward
    induction.
    '''
    joint = _as_policy(policy).joint_probabilities(model)
    values = np.zeros((model.horizon + 1, model.n_states))
    for t in range(model.horizon - 1, -1, -1):
        q = model.rewards + np.einsum('sjn,n->sj', model.transitions, values[t + 1])
        values[t] = np.sum(joint * q, axis=1)
    return values


def _sample_rows(rng, probabilities):
    ''' One categorical draw per row of a (K, C) probability table. '''
    cumulative = np.cumsum(probabilities, axis=1)
    u = rng.random(len(probabilities))[:, None] * cumulative[:, -1:]
    return np.minimum(np.sum(cumulative <= u, axis=1), probabilities.shape[1] - 1)


def simulate_returns(model, policy, n_episodes, seed=None):
    ''' Undiscounted returns of n_episodes sampled episodes. '''
    rng = np.random.default_rng(seed)
    local = _as_policy(policy).probabilities(model)
    agents = np.arange(model.n_agents)
    states = _sample_rows(rng, np.tile(model.initial, (n_episodes, 1)))
    returns = np.zeros(n_episodes)
    weights = model.n_actions ** agents[::-1]
    for _ in range(model.horizon):
        actions = np.stack([_sample_rows(rng, local[states, i]) for i in agents], axis=1)
        joint = actions @ weights
        returns += model.rewards[states, joint]
        states = _sample_rows(rng, model.transitions[states, joint])
    return returns


def _health_codes(n_agents):
    return (np.arange(2 ** n_agents)[:, None] >> np.arange(n_agents)[::-1]) & 1


def random_tabular_model(seed=None, n_agents=2, n_base=3, n_actions=2, n_observations=2,
                         horizon=3, support=2, max_death_probability=0.5,
                         dead_action_count=1, reward_scale=1.0, reward_offset=0.0):
    ''' Random binary-health model. A terminated agent keeps only its first
    `dead_action_count` actions; anything other than 1 breaks the singleton
    premise on purpose.

    Rewards are uniform on reward_offset + reward_scale * [-1, 1]. With a zero
    offset returns are centred and a state baseline has little to remove.
    '''
    rng = np.random.default_rng(seed)
    codes = _health_codes(n_agents).astype(float)
    n_codes = len(codes)
    n_states = n_base * n_codes
    base = np.repeat(np.arange(n_base), n_codes)
    health = np.tile(codes, (n_base, 1))

    initial = np.zeros(n_states)
    initial[np.arange(n_base) * n_codes + n_codes - 1] = rng.dirichlet(np.ones(n_base))

    available = np.ones((n_states, n_agents, n_actions), dtype=bool)
    dead = health == 0.0
    available[dead] = np.arange(n_actions) < dead_action_count

    observations = rng.integers(n_observations, size=(n_agents, n_base))[:, base]

    n_joint = n_actions ** n_agents
    transitions = np.zeros((n_states, n_joint, n_states))
    for s in range(n_states):
        for j in range(n_joint):
            bases = rng.choice(n_base, size=min(support, n_base), replace=False)
            base_probabilities = rng.dirichlet(np.ones(len(bases)))
            death = rng.uniform(0.0, max_death_probability, size=n_agents)
            # survive with 1 - death while alive; terminated agents stay terminated
            per_agent = np.where(dead[s][None, :], np.where(codes == 0.0, 1.0, 0.0),
                                 np.where(codes == 1.0, 1.0 - death, death))
            code_probabilities = np.prod(per_agent, axis=1)
            for b, pb in zip(bases, base_probabilities):
                transitions[s, j, b * n_codes:(b + 1) * n_codes] = pb * code_probabilities

    rewards = reward_offset + reward_scale * rng.uniform(-1.0, 1.0, size=(n_states, n_joint))
    return TabularDecPomdp(initial, transitions, rewards, health, observations,
                           available, base, horizon, n_observations)


def default_tabular_model(seed=0):
    ''' Two agents, three base states, two actions, horizon three. '''
    return random_tabular_model(seed=seed).validate()
