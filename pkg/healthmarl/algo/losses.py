from collections import namedtuple

import numpy as np

from ..nn import (critic_value_grad, critic_values, gaussian_entropy,
                  gaussian_entropy_grad, gaussian_logprob, mlp_forward,
                  policy_logprob_grad)
from ..utils import NonFiniteError, check_finite

PolicyMinibatch = namedtuple('PolicyMinibatch',
                             'observations actions log_probs psi health')

PolicyLossInfo = namedtuple('PolicyLossInfo', 'objective entropy clip_fraction approx_kl')


def clipped_surrogate(ratio, psi, clip_eps):
    ''' Per-sample min(rho * Psi, clip(rho, 1 - eps, 1 + eps) * Psi) and the
    mask of samples where the unclipped term is the active one.
    '''
    unclipped = ratio * psi
    clipped = np.clip(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * psi
    return np.minimum(unclipped, clipped), unclipped <= clipped


def ppo_policy_loss(policy, minibatch, clip_eps=0.2, entropy_coef=0.01):
    ''' Negative clipped surrogate with a health-masked entropy bonus.

    Returns (loss, flat gradient over policy.flatten(), PolicyLossInfo).
    Samples of terminated agents keep their Psi, which is already zero under
    the min-health variant, but never receive the entropy bonus.
    '''
    observations = np.asarray(minibatch.observations, dtype=float)
    N = len(observations)
    mean, cache = mlp_forward(policy.mean, observations)
    log_probs = gaussian_logprob(mean, policy.log_std, minibatch.actions)
    ratio = np.exp(log_probs - minibatch.log_probs)
    try:
        check_finite(ratio, 'probability ratio')
    except NonFiniteError as err:
        raise NonFiniteError('non-finite probability ratio at sample {}'.format(
            err.index[0]), index=err.index[0])

    psi = np.asarray(minibatch.psi, dtype=float)
    alive = (np.asarray(minibatch.health) > 0.0).astype(float)
    surrogate, active = clipped_surrogate(ratio, psi, clip_eps)
    entropy = gaussian_entropy(policy.log_std)
    objective = float(np.mean(surrogate + entropy_coef * entropy * alive))

    grad = policy_logprob_grad(policy, observations, minibatch.actions,
                               -(active * ratio * psi) / N, forward=(mean, cache))
    grad[-len(policy.log_std):] -= (entropy_coef * alive.mean()
                                    * gaussian_entropy_grad(policy.log_std))

    info = PolicyLossInfo(objective=objective, entropy=entropy,
                          clip_fraction=float(np.mean(np.abs(ratio - 1.0) > clip_eps)),
                          approx_kl=float(np.mean(minibatch.log_probs - log_probs)))
    return -objective, grad, info


def critic_loss(critic, inputs, targets):
    ''' Mean squared error of the critic against frozen value targets;
    returns (loss, flat gradient).
    '''
    inputs = np.asarray(inputs, dtype=float)
    targets = np.asarray(targets, dtype=float)
    values = critic_values(critic, inputs)
    residual = values - targets
    loss = float(np.mean(residual ** 2))
    grad = critic_value_grad(critic, inputs, 2.0 * residual / len(targets))
    return loss, check_finite(grad, 'critic gradient')
