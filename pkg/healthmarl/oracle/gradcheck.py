"""Finite-difference checks of the analytic gradients used in training."""
from collections import namedtuple

import numpy as np

from ..algo import PolicyMinibatch, critic_loss, ppo_policy_loss
from ..nn import (CriticParams, MlpParams, MlpSpec, PolicyParams, gaussian_entropy,
                  gaussian_entropy_grad, gaussian_logprob, policy_logprob_grad,
                  policy_mean)

GradientCheck = namedtuple('GradientCheck', 'name max_relative_error n_points')


def finite_difference(f, x, step=1e-5):
    ''' Central differences of a scalar function of a flat vector. '''
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for k in range(len(x)):
        forward, backward = np.array(x), np.array(x)
        forward[k] += step
        backward[k] -= step
        grad[k] = (f(forward) - f(backward)) / (2.0 * step)
    return grad


def relative_error(analytic, numeric):
    analytic, numeric = np.ravel(analytic), np.ravel(numeric)
    scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)
    return float(np.linalg.norm(analytic - numeric) / scale)


def _random_policy(rng, observation_dim=4, action_dim=2, hidden=(5, 5)):
    spec = MlpSpec((observation_dim,) + hidden + (action_dim,), 'tanh')
    mean = MlpParams(spec, rng.normal(0.0, 0.5, spec.n_params))
    return PolicyParams(mean, rng.uniform(-1.0, 0.5, action_dim))


def _with_flat(policy, flat):
    n = len(policy.mean.values)
    return PolicyParams(MlpParams(policy.mean.spec, flat[:n]), flat[n:])


def _logprob_error(rng, n_samples=6):
    policy = _random_policy(rng)
    observations = rng.normal(size=(n_samples, 4))
    actions = rng.normal(size=(n_samples, 2))
    weights = rng.normal(size=n_samples)

    def objective(flat):
        candidate = _with_flat(policy, flat)
        return np.dot(weights, gaussian_logprob(policy_mean(candidate, observations),
                                                candidate.log_std, actions))

    analytic = policy_logprob_grad(policy, observations, actions, weights)
    return relative_error(analytic, finite_difference(objective, policy.flatten()))


def _entropy_error(rng):
    log_std = rng.uniform(-2.0, 1.0, 3)
    return relative_error(gaussian_entropy_grad(log_std),
                          finite_difference(gaussian_entropy, log_std))


def _critic_error(rng, n_samples=6):
    spec = MlpSpec((3, 4, 4, 1), 'elu')
    critic = CriticParams(MlpParams(spec, rng.normal(0.0, 0.5, spec.n_params)), 'central')
    inputs = rng.normal(size=(n_samples, 3))
    targets = rng.normal(size=n_samples)

    def objective(values):
        return critic_loss(critic._replace(mlp=MlpParams(spec, values)), inputs, targets)[0]

    analytic = critic_loss(critic, inputs, targets)[1]
    return relative_error(analytic, finite_difference(objective, critic.mlp.values))


def _surrogate_error(rng, n_samples=8, clip_eps=0.2, entropy_coef=0.01):
    policy = _random_policy(rng)
    observations = rng.normal(size=(n_samples, 4))
    actions = rng.normal(size=(n_samples, 2))
    log_probs = gaussian_logprob(policy_mean(policy, observations), policy.log_std, actions)
    shift = rng.normal(0.0, 0.3, n_samples)
    # ratios right at 1 +- eps sit on the kink of the surrogate
    near_kink = np.abs(np.abs(np.exp(-shift) - 1.0) - clip_eps) < 1e-3
    shift[near_kink] = 0.0
    minibatch = PolicyMinibatch(observations, actions, log_probs + shift,
                                rng.normal(size=n_samples),
                                (rng.random(n_samples) < 0.75).astype(float))

    def objective(flat):
        return ppo_policy_loss(_with_flat(policy, flat), minibatch, clip_eps, entropy_coef)[0]

    analytic = ppo_policy_loss(policy, minibatch, clip_eps, entropy_coef)[1]
    return relative_error(analytic, finite_difference(objective, policy.flatten()))


CHECKS = [('policy log-probability', _logprob_error),
          ('gaussian entropy', _entropy_error),
          ('critic mean squared error', _critic_error),
          ('clipped surrogate', _surrogate_error)]


def check_gradients(n_points=100, seed=0):
    ''' Largest relative error of every analytic gradient path over
    n_points random configurations each.
    '''
    rng = np.random.default_rng(seed)
    results = []
    for name, error in CHECKS:
        worst = max(error(rng) for _ in range(n_points))
        results.append(GradientCheck(name, worst, n_points))
    return results
