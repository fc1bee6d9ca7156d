from collections import namedtuple

import numpy as np

from .mlp import MlpSpec, MlpParams, mlp_backward, mlp_forward, mlp_init
from ..utils import clip_log_std

HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def gaussian_logprob(mean, log_std, action):
    ''' Diagonal Gaussian log density, summed over the last axis. '''
    z = (np.asarray(action) - mean) * np.exp(-np.asarray(log_std))
    return np.sum(-0.5 * z ** 2 - log_std - HALF_LOG_2PI, axis=-1)


def gaussian_logprob_grad(mean, log_std, action):
    ''' Gradients of gaussian_logprob with respect to mean and log_std,
    per sample.
    '''
    inv_std = np.exp(-np.asarray(log_std))
    z = (np.asarray(action) - mean) * inv_std
    dmean = z * inv_std
    dlog_std = z ** 2 - 1.0
    return dmean, np.broadcast_to(dlog_std, np.shape(dmean)).copy()


def gaussian_entropy(log_std):
    return float(np.sum(0.5 + HALF_LOG_2PI + np.asarray(log_std)))


def gaussian_entropy_grad(log_std):
    return np.ones_like(np.asarray(log_std, dtype=float))


class PolicyParams(namedtuple('PolicyParams', 'mean log_std')):
    ''' Shared policy: an MLP producing the action mean and a
    state-independent log standard deviation.
    '''
    __slots__ = ()

    @property
    def n_params(self):
        return len(self.mean.values) + len(self.log_std)

    def flatten(self):
        return np.concatenate([self.mean.values, self.log_std])

    def unflatten(self, flat):
        n = len(self.mean.values)
        return PolicyParams(MlpParams(self.mean.spec, np.array(flat[:n])),
                            clip_log_std(np.array(flat[n:])))


def policy_init(observation_dim, action_dim, rng, hidden=(64, 64), activation='tanh',
                log_std_init=np.log(0.5), output_gain=0.01):
    spec = MlpSpec((observation_dim,) + tuple(hidden) + (action_dim,), activation)
    return PolicyParams(mlp_init(spec, rng, output_gain=output_gain),
                        np.full(action_dim, log_std_init))


def policy_mean(policy, observations):
    mean, _ = mlp_forward(policy.mean, observations)
    return mean


def sample_actions(policy, observations, noise):
    ''' Actions mean + std * noise with their log-probabilities; `noise` is
    standard normal of the same shape as the actions. The log-probability is
    that of the unclamped sample.
    '''
    mean = policy_mean(policy, observations)
    actions = mean + np.exp(policy.log_std) * noise
    return actions, gaussian_logprob(mean, policy.log_std, actions)


def policy_logprob_grad(policy, observations, actions, weights, forward=None):
    ''' Flat gradient of sum_k weights[k] * log pi(actions[k] | observations[k])
    over policy.flatten(). `forward` may pass a (mean, cache) pair already
    computed for these observations.
    '''
    mean, cache = forward if forward is not None else mlp_forward(policy.mean, observations)
    weights = np.asarray(weights, dtype=float)
    dmean, dlog_std = gaussian_logprob_grad(mean, policy.log_std, actions)
    grad_mean, _ = mlp_backward(policy.mean, cache, weights[:, None] * dmean)
    return np.concatenate([grad_mean, np.sum(weights[:, None] * dlog_std, axis=0)])
