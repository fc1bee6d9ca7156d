from .gae import compute_gae, compute_value_targets, discounted_returns
from .rollout import RolloutBatch, collect_rollouts
from .crediting import VARIANTS, AdvantageRecord, compute_psi, normalize_psi
from .losses import PolicyMinibatch, clipped_surrogate, critic_loss, ppo_policy_loss
from .mappo import (IterationStats, Learner, TrainConfig, init_learner, train,
                    train_iteration)
