"""Decentralised execution of the shared policy.

Episodes run in lock step so the policy network is evaluated once per time
step for the whole batch, but every episode owns its random stream: episode e
only ever draws from the e-th child of the batch seed.
"""
import logging
from collections import namedtuple

import numpy as np

from ..core import JointState, ObservationActionHistory, constrict_actions
from ..nn import policy_mean, gaussian_logprob
from ..utils import as_seed_sequence, check_finite, clip_actions


class RolloutBatch(namedtuple('RolloutBatch', [
        'health', 'nonhealth', 'times', 'observations', 'actions',
        'executed_actions', 'log_probs', 'rewards', 'dones'])):
    ''' E episodes of T steps by n agents.

    health (E, T+1, n), nonhealth (E, T+1, P), times (T+1,),
    observations (E, T+1, n, O), actions and executed_actions (E, T, n, A),
    log_probs (E, T, n), rewards and dones (E, T).
    '''
    __slots__ = ()

    @property
    def n_episodes(self):
        return self.rewards.shape[0]

    @property
    def horizon(self):
        return self.rewards.shape[1]

    @property
    def n_agents(self):
        return self.health.shape[2]

    @property
    def n_samples(self):
        return self.log_probs.size

    @property
    def episode_returns(self):
        return self.rewards.sum(axis=1)

    def state(self, e, t):
        return JointState(self.health[e, t], self.nonhealth[e, t], int(self.times[t]))

    def history(self, e, i, t):
        ''' tau_{i,t}: observations 0..t and the actions taken before t. '''
        return ObservationActionHistory(self.observations[e, :t + 1, i],
                                        self.actions[e, :t, i])


def collect_rollouts(policy, env, n_episodes, seed=None, greedy=False):
    ''' Runs n_episodes full episodes of env with every agent executing its
    own copy of `policy` on its current observation.

    With greedy=True the policy mean is executed and no noise is drawn.
    '''
    children = as_seed_sequence(seed).spawn(n_episodes)
    resets = [env.reset(seed=child.spawn(1)[0]) for child in children]
    rngs = [np.random.default_rng(child) for child in children]

    E, T, n = n_episodes, env.episode_length, env.n_agents
    O, A = env.observation_dim, env.action_dim
    health = np.zeros((E, T + 1, n))
    nonhealth = np.zeros((E, T + 1, len(resets[0][0].nonhealth) if E else 0))
    observations = np.zeros((E, T + 1, n, O))
    actions = np.zeros((E, T, n, A))
    executed = np.zeros((E, T, n, A))
    log_probs = np.zeros((E, T, n))
    rewards = np.zeros((E, T))
    dones = np.zeros((E, T), dtype=bool)

    states = [state for state, _ in resets]
    for e, (state, obs) in enumerate(resets):
        health[e, 0] = state.health.values
        nonhealth[e, 0] = state.nonhealth
        observations[e, 0] = obs.observations

    for t in range(T):
        mean = policy_mean(policy, observations[:, t].reshape(E * n, O)).reshape(E, n, A)
        if greedy:
            sampled = mean
        else:
            noise = np.stack([rng.standard_normal((n, A)) for rng in rngs]) if E else mean
            sampled = mean + np.exp(policy.log_std) * noise
        log_probs[:, t] = check_finite(gaussian_logprob(mean, policy.log_std, sampled),
                                       'behaviour log-probability')
        actions[:, t] = sampled
        executed[:, t] = constrict_actions(
            clip_actions(sampled, env.action_low, env.action_high), health[:, t])

        for e in range(E):
            state, obs, reward, done = env.step(states[e], sampled[e], rngs[e])
            states[e] = state
            health[e, t + 1] = state.health.values
            nonhealth[e, t + 1] = state.nonhealth
            observations[e, t + 1] = obs.observations
            rewards[e, t] = reward
            dones[e, t] = done

    batch = RolloutBatch(health, nonhealth, np.arange(T + 1), observations, actions,
                         executed, log_probs, rewards, dones)
    logging.debug('{}: collected {} episodes, mean return {:.4f}'.format(
        getattr(env, 'name', type(env).__name__), E,
        float(batch.episode_returns.mean()) if E else float('nan')))
    return batch
