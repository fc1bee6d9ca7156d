"""Health-informed multi-agent PPO.

Every iteration collects a batch of episodes with decentralised copies of the
shared policy, credits each agent-step with Psi, and then runs K epochs of
clipped-surrogate updates for the policy and MSE updates for the critic over
shuffled minibatches.
"""
import logging
from collections import namedtuple
from typing import NamedTuple, Optional

import numpy as np
from sklearn.utils import gen_even_slices

from .crediting import CRITIC_KIND, VARIANTS, compute_psi
from .losses import PolicyMinibatch, critic_loss, ppo_policy_loss
from .rollout import collect_rollouts
from ..nn import adam_init, adam_step, critic_init, policy_init, save_checkpoint
from ..utils import ConfigurationError, NonFiniteError, as_seed_sequence


class TrainConfig(NamedTuple):
    variant: str = 'min-health'
    gamma: float = 0.99
    lam: float = 0.95
    clip_eps: float = 0.2
    entropy_coef: float = 0.01
    epochs: int = 8
    minibatches: int = 8
    episodes_per_batch: int = 256
    total_episodes: int = 50000
    actor_lr: float = 1e-3
    critic_lr: float = 5e-3
    h_min: float = 0.0
    normalize_advantages: bool = False
    policy_hidden: tuple = (64, 64)
    policy_activation: str = 'tanh'
    critic_hidden: tuple = (64,) * 8
    critic_activation: str = 'elu'
    local_critic_hidden: tuple = (64, 64)
    local_critic_activation: str = 'tanh'
    crash_checkpoint: Optional[str] = None

    def validate(self):
        if self.variant not in VARIANTS:
            raise ConfigurationError('variant {} not avaliable, expected one of {}'.format(
                self.variant, VARIANTS))
        if not (0.0 <= self.gamma <= 1.0 and 0.0 <= self.lam <= 1.0):
            raise ConfigurationError('gamma and lam must lie in [0, 1]')
        if self.clip_eps <= 0:
            raise ConfigurationError('clip_eps must be positive, got {}'.format(self.clip_eps))
        if self.entropy_coef < 0:
            raise ConfigurationError('entropy_coef must be nonnegative')
        if self.epochs < 1 or self.minibatches < 1:
            raise ConfigurationError('epochs and minibatches must be at least 1')
        if self.episodes_per_batch < 1 or self.total_episodes < 1:
            raise ConfigurationError('episode counts must be at least 1')
        if self.actor_lr <= 0 or self.critic_lr <= 0:
            raise ConfigurationError('learning rates must be positive')
        if not 0.0 <= self.h_min <= 1.0:
            raise ConfigurationError('h_min must lie in [0, 1], got {}'.format(self.h_min))
        return self


Learner = namedtuple('Learner', 'policy critic policy_adam critic_adam episodes iteration')

IterationStats = namedtuple('IterationStats', [
    'iteration', 'episodes', 'mean_return', 'policy_loss', 'critic_loss', 'entropy',
    'clip_fraction', 'approx_kl', 'death_fraction', 'n_samples', 'n_live_samples',
    'episode_returns'])


def init_learner(env, config, seed=None):
    config = config.validate()
    rng = np.random.default_rng(as_seed_sequence(seed))
    policy = policy_init(env.observation_dim, env.action_dim, rng,
                         hidden=config.policy_hidden, activation=config.policy_activation)
    if CRITIC_KIND[config.variant] == 'local':
        critic = critic_init(env.observation_dim, rng, kind='local',
                             hidden=config.local_critic_hidden,
                             activation=config.local_critic_activation)
    else:
        critic = critic_init(env.state_dim, rng, kind='central',
                             hidden=config.critic_hidden, activation=config.critic_activation)
    return Learner(policy, critic, adam_init(policy.flatten()),
                   adam_init(critic.mlp.values), 0, 0)


def _update(learner, batch, record, config, rng):
    T = batch.horizon
    samples = PolicyMinibatch(
        observations=batch.observations[:, :T].reshape(-1, batch.observations.shape[-1]),
        actions=batch.actions.reshape(-1, batch.actions.shape[-1]),
        log_probs=batch.log_probs.ravel(),
        psi=record.psi.ravel(),
        health=batch.health[:, :T].ravel())
    inputs = record.critic_inputs.reshape(-1, record.critic_inputs.shape[-1])
    targets = record.targets.ravel()

    policy, critic = learner.policy, learner.critic
    policy_adam, critic_adam = learner.policy_adam, learner.critic_adam
    policy_losses, critic_losses, infos = [], [], []
    for epoch in range(config.epochs):
        order = rng.permutation(len(samples.psi))
        for part in gen_even_slices(len(order), config.minibatches):
            minibatch = PolicyMinibatch(*(field[order[part]] for field in samples))
            loss, grad, info = ppo_policy_loss(policy, minibatch, config.clip_eps,
                                               config.entropy_coef)
            flat, policy_adam = adam_step(policy.flatten(), grad, policy_adam,
                                          config.actor_lr)
            policy = policy.unflatten(flat)
            policy_losses.append(loss)
            infos.append(info)

        order = rng.permutation(len(targets))
        for part in gen_even_slices(len(order), config.minibatches):
            loss, grad = critic_loss(critic, inputs[order[part]], targets[order[part]])
            values, critic_adam = adam_step(critic.mlp.values, grad, critic_adam,
                                            config.critic_lr)
            critic = critic._replace(mlp=critic.mlp._replace(values=values))
            critic_losses.append(loss)
        logging.debug('{}: epoch {} policy loss {:.4e}, critic loss {:.4e}'.format(
            config.variant, epoch, policy_losses[-1], critic_losses[-1]))

    learner = learner._replace(policy=policy, critic=critic, policy_adam=policy_adam,
                               critic_adam=critic_adam)
    return learner, np.mean(policy_losses), np.mean(critic_losses), infos


def train_iteration(learner, env, config, seed=None, n_episodes=None):
    ''' One collect/credit/update cycle; returns (learner, IterationStats).

    Results only depend on the learner, the config and `seed`. A non-finite
    gradient or ratio aborts the iteration after writing a crash checkpoint
    to config.crash_checkpoint when one is set.
    '''
    n_episodes = config.episodes_per_batch if n_episodes is None else n_episodes
    rollout_seed, shuffle_seed = as_seed_sequence(seed).spawn(2)
    try:
        batch = collect_rollouts(learner.policy, env, n_episodes, rollout_seed)
        record = compute_psi(config.variant, batch, learner.critic, env, config.gamma,
                             config.lam, config.h_min, config.normalize_advantages)
        updated, policy_loss, value_loss, infos = _update(
            learner, batch, record, config, np.random.default_rng(shuffle_seed))
    except NonFiniteError as err:
        if config.crash_checkpoint:
            save_checkpoint(config.crash_checkpoint, learner.policy, learner.critic,
                            env.n_agents, getattr(env, 'name', None),
                            getattr(env, 'config', None))
        logging.error('{}: iteration {} aborted: {}'.format(
            config.variant, learner.iteration, err))
        raise

    returns = batch.episode_returns
    learner = updated._replace(episodes=learner.episodes + n_episodes,
                               iteration=learner.iteration + 1)
    stats = IterationStats(
        iteration=learner.iteration,
        episodes=learner.episodes,
        mean_return=float(returns.mean()),
        policy_loss=float(policy_loss),
        critic_loss=float(value_loss),
        entropy=float(np.mean([info.entropy for info in infos])),
        clip_fraction=float(np.mean([info.clip_fraction for info in infos])),
        approx_kl=float(np.mean([info.approx_kl for info in infos])),
        death_fraction=float(np.mean(batch.health[:, -1] == 0.0)),
        n_samples=batch.n_samples,
        n_live_samples=int(np.sum(batch.health[:, :-1] > 0.0)),
        episode_returns=returns)
    logging.info('{}: iteration {} episodes {} mean return {:.4f} policy loss {:.4e} '
                 'critic loss {:.4e} entropy {:.3f} clip {:.3f} deaths {:.3f}'.format(
                     config.variant, stats.iteration, stats.episodes, stats.mean_return,
                     stats.policy_loss, stats.critic_loss, stats.entropy,
                     stats.clip_fraction, stats.death_fraction))
    return learner, stats


def train(env, config, seed=None, callback=None):
    ''' Runs train_iteration until config.total_episodes episodes have been
    consumed; the last batch is shortened if needed. callback(learner, stats)
    is called after every iteration.
    '''
    config = config.validate()
    init_seed, run_seed = as_seed_sequence(seed).spawn(2)
    learner = init_learner(env, config, init_seed)
    n_iterations = -(-config.total_episodes // config.episodes_per_batch)
    history = []
    for iteration_seed in run_seed.spawn(n_iterations):
        n_episodes = min(config.episodes_per_batch, config.total_episodes - learner.episodes)
        learner, stats = train_iteration(learner, env, config, iteration_seed, n_episodes)
        history.append(stats)
        if callback is not None:
            callback(learner, stats)
    return learner, history
