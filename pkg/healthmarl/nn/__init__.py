from .mlp import MlpSpec, MlpParams, MlpCache, mlp_init, mlp_forward, mlp_backward
from .gaussian import (PolicyParams, gaussian_entropy, gaussian_entropy_grad,
                       gaussian_logprob, gaussian_logprob_grad, policy_init,
                       policy_logprob_grad, policy_mean, sample_actions)
from .critic import CriticParams, critic_init, critic_values, critic_value_grad
from .adam import AdamState, adam_init, adam_step
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
