import logging

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from healthmarl.algo import VARIANTS, TrainConfig, train
from healthmarl.core import JointObservation
from healthmarl.nn import policy_mean


class HealthInformedMAPPO(BaseEstimator):
    ''' Multi-agent PPO with a shared policy, trained on an environment.

    variant selects the credit assigned to each agent-step:
    'min-health' (central critic with the minimum-health counterfactual
    baseline), 'central-critic' or 'local-critic'. Every other argument is
    the TrainConfig field of the same name.
    '''
    def __init__(self, variant='min-health', gamma=0.99, lam=0.95, clip_eps=0.2,
                 entropy_coef=0.01, epochs=8, minibatches=8, episodes_per_batch=256,
                 total_episodes=50000, actor_lr=1e-3, critic_lr=5e-3, h_min=0.0,
                 normalize_advantages=False, policy_hidden=(64, 64),
                 policy_activation='tanh', critic_hidden=(64,) * 8,
                 critic_activation='elu', local_critic_hidden=(64, 64),
                 local_critic_activation='tanh', crash_checkpoint=None,
                 random_state=None):
        if variant not in VARIANTS:
            raise(ValueError)

        self.variant = variant
        self.gamma = gamma
        self.lam = lam
        self.clip_eps = clip_eps
        self.entropy_coef = entropy_coef
        self.epochs = epochs
        self.minibatches = minibatches
        self.episodes_per_batch = episodes_per_batch
        self.total_episodes = total_episodes
        self.actor_lr = actor_lr
        self.critic_lr = critic_lr
        self.h_min = h_min
        self.normalize_advantages = normalize_advantages
        self.policy_hidden = policy_hidden
        self.policy_activation = policy_activation
        self.critic_hidden = critic_hidden
        self.critic_activation = critic_activation
        self.local_critic_hidden = local_critic_hidden
        self.local_critic_activation = local_critic_activation
        self.crash_checkpoint = crash_checkpoint
        self.random_state = random_state

    @property
    def train_config(self):
        return TrainConfig(**{name: getattr(self, name) for name in TrainConfig._fields})

    def fit(self, env, callback=None):
        learner, history = train(env, self.train_config, seed=self.random_state,
                                 callback=callback)
        logging.debug('{}: fitted on {} episodes'.format(self.variant, learner.episodes))
        self.learner_ = learner
        self.policy_ = learner.policy
        self.critic_ = learner.critic
        self.history_ = history
        return self

    def predict(self, observations):
        ''' Greedy (mean) actions for a JointObservation or a
        (..., observation_dim) array.
        '''
        check_is_fitted(self, 'policy_')
        if isinstance(observations, JointObservation):
            observations = observations.observations
        observations = np.asarray(observations, dtype=float)
        actions = policy_mean(self.policy_, observations.reshape(-1, observations.shape[-1]))
        return actions.reshape(observations.shape[:-1] + (actions.shape[-1],))
