import numpy as np


def compute_gae(rewards, values, gamma, lam):
    ''' Generalized advantage estimates by the backward recursion
    A_t = delta_t + gamma * lam * A_{t+1}.

    Time is the last axis; values carries one extra bootstrap entry
    values[..., T] (0 for a finished episode).
    '''
    rewards = np.asarray(rewards, dtype=float)
    values = np.asarray(values, dtype=float)
    T = rewards.shape[-1]
    if values.shape[:-1] != rewards.shape[:-1] or values.shape[-1] != T + 1:
        raise ValueError('values must have shape {} + ({},), got {}'.format(
            rewards.shape[:-1], T + 1, values.shape))
    deltas = rewards + gamma * values[..., 1:] - values[..., :-1]
    advantages = np.zeros_like(rewards)
    running = np.zeros(rewards.shape[:-1])
    for t in range(T - 1, -1, -1):
        running = deltas[..., t] + gamma * lam * running
        advantages[..., t] = running
    return advantages


def compute_value_targets(advantages, values):
    ''' V^targ_t = A_t + V_old(s_t). A trailing bootstrap entry in values is
    ignored.
    '''
    advantages = np.asarray(advantages, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.shape[-1] == advantages.shape[-1] + 1:
        values = values[..., :-1]
    if values.shape != advantages.shape:
        raise ValueError('advantages {} and values {} do not match'.format(
            advantages.shape, values.shape))
    return advantages + values


def discounted_returns(rewards, gamma=1.0):
    ''' Reward-to-go G_t along the last axis. '''
    rewards = np.asarray(rewards, dtype=float)
    returns = np.zeros_like(rewards)
    running = np.zeros(rewards.shape[:-1])
    for t in range(rewards.shape[-1] - 1, -1, -1):
        running = rewards[..., t] + gamma * running
        returns[..., t] = running
    return returns
