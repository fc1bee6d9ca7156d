"""Per-agent credit Psi_{i,t} for the three critic variants.

min-health:     Psi_{i,t} = h_{i,t} * (V^targ_t - V_old(s_t with h_i = h_min))
central-critic: Psi_{i,t} = A^GAE_t from the joint-state critic, equal for all i
local-critic:   Psi_{i,t} = A^GAE_{i,t} from a critic of agent i's observation
"""
import logging
from collections import namedtuple

import numpy as np

from .gae import compute_gae, compute_value_targets
from ..core import DEFAULT_H_MIN, counterfactual_health
from ..nn import critic_values
from ..utils import ConfigurationError

VARIANTS = ['min-health', 'central-critic', 'local-critic']

CRITIC_KIND = {'min-health': 'central', 'central-critic': 'central',
               'local-critic': 'local'}


class AdvantageRecord(namedtuple('AdvantageRecord', [
        'advantages', 'targets', 'values', 'psi', 'counterfactual_values',
        'critic_inputs'])):
    ''' Crediting result for one batch.

    For the central variants advantages and targets are (E, T), values
    (E, T+1) and critic_inputs (E, T, F); for the local variant each carries
    an extra agent axis. psi is always (E, T, n). counterfactual_values is
    (E, T, n) under min-health and None otherwise.

    psi is zero wherever h_{i,t} = 0 only under min-health. The central and
    local variants leave dead samples with their advantage; those samples
    still drop out of the policy update through its health mask.
    '''
    __slots__ = ()


def _check_variant(variant, critic):
    if variant not in VARIANTS:
        raise ConfigurationError('variant {} not avaliable, expected one of {}'.format(
            variant, VARIANTS))
    if critic.kind != CRITIC_KIND[variant]:
        raise ConfigurationError('variant {} needs a {} critic, got a {} one'.format(
            variant, CRITIC_KIND[variant], critic.kind))


def _bootstrapped(values):
    values = np.array(values)
    values[..., -1] = 0.0
    return values


def normalize_psi(psi, health, mask_by_health=True):
    ''' Zero-mean, unit-variance credit over live samples; dead samples are
    set back to zero when mask_by_health.
    '''
    alive = np.asarray(health) > 0.0
    live = psi[alive] if np.any(alive) else psi.ravel()
    if live.size == 0:
        return psi
    psi = (psi - live.mean()) / (live.std() + 1e-8)
    return np.where(alive, psi, 0.0) if mask_by_health else psi


def compute_psi(variant, batch, critic, env, gamma=0.99, lam=0.95, h_min=DEFAULT_H_MIN,
                normalize=False):
    _check_variant(variant, critic)
    T = batch.horizon
    health = batch.health[:, :T]
    counterfactual = None

    if variant == 'local-critic':
        values = critic_values(critic, batch.observations)            # (E, T+1, n)
        values = _bootstrapped(np.moveaxis(values, 1, -1))            # (E, n, T+1)
        rewards = np.broadcast_to(batch.rewards[:, None, :], values.shape[:-1] + (T,))
        advantages = np.moveaxis(compute_gae(rewards, values, gamma, lam), -1, 1)
        values = np.moveaxis(values, -1, 1)
        targets = compute_value_targets(advantages, values[:, :T])
        psi = np.array(advantages)
        inputs = batch.observations[:, :T]
    else:
        features = env.critic_features(batch.health, batch.nonhealth, batch.times)
        values = _bootstrapped(critic_values(critic, features))
        advantages = compute_gae(batch.rewards, values, gamma, lam)
        targets = compute_value_targets(advantages, values)
        inputs = features[:, :T]
        if variant == 'central-critic':
            psi = np.repeat(advantages[..., None], batch.n_agents, axis=-1)
        else:
            counterfactual = np.zeros_like(health)
            for i in range(batch.n_agents):
                features_i = env.critic_features(counterfactual_health(health, i, h_min),
                                                 batch.nonhealth[:, :T], batch.times[:T])
                counterfactual[..., i] = critic_values(critic, features_i)
            psi = health * (targets[..., None] - counterfactual)

    if normalize:
        psi = normalize_psi(psi, health, mask_by_health=variant == 'min-health')
    logging.debug('{}: psi mean {:.4e}, std {:.4e}'.format(variant, psi.mean(), psi.std()))
    return AdvantageRecord(advantages, targets, values, psi, counterfactual, inputs)
