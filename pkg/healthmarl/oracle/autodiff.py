import jax
import jax.numpy as jnp
import numpy as np

from ..envs.tabular import DEFAULT_BUDGET, enumerate_trajectories

jax.config.update("jax_enable_x64", True)

# finite stand-in for -inf so that masked logits have clean zero gradients
_MASKED = -1e30


def _objective(theta, observations, available, states, local, env_probabilities, returns):
    agents = jnp.arange(theta.shape[0])
    logits = theta[agents[None, :], observations.T]
    log_pi = jax.nn.log_softmax(jnp.where(available, logits, _MASKED), axis=-1)
    # log pi of every agent's action along every trajectory, shape (K, H, n)
    chosen = log_pi[states[..., None], agents, local]
    probabilities = env_probabilities * jnp.exp(chosen.sum(axis=(1, 2)))
    return jnp.dot(probabilities, returns)


_gradient = jax.grad(_objective, argnums=0)


def exact_gradient_autodiff(model, theta, budget=DEFAULT_BUDGET):
    ''' Gradient of the exact objective by reverse-mode autodiff over the
    enumerated trajectory table.
    '''
    table = enumerate_trajectories(model, budget)
    H = table.joint_actions.shape[1]
    grad = _gradient(jnp.asarray(theta, dtype=jnp.float64),
                     jnp.asarray(model.observations), jnp.asarray(model.available),
                     jnp.asarray(table.states[:, :H]),
                     jnp.asarray(model.joint_actions[table.joint_actions]),
                     jnp.asarray(table.env_probabilities),
                     jnp.asarray(table.rewards.sum(axis=1)))
    return np.asarray(grad)
