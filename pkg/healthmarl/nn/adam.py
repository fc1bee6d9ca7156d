from collections import namedtuple

import numpy as np

from ..utils import check_finite

AdamState = namedtuple('AdamState', 'm v step beta_1 beta_2 eps')


def adam_init(params, beta_1=0.9, beta_2=0.999, eps=1e-8):
    params = np.asarray(params, dtype=float)
    return AdamState(np.zeros_like(params), np.zeros_like(params), 0, beta_1, beta_2, eps)


def adam_step(params, grads, state, learning_rate):
    ''' One bias-corrected Adam update; returns (params, state). '''
    params = np.asarray(params, dtype=float)
    grads = check_finite(np.asarray(grads, dtype=float), 'gradient')
    if grads.shape != params.shape or state.m.shape != params.shape:
        raise ValueError('parameter, gradient and moment shapes differ: {}, {}, {}'.format(
            params.shape, grads.shape, state.m.shape))

    step = state.step + 1
    m = state.beta_1 * state.m + (1 - state.beta_1) * grads
    v = state.beta_2 * state.v + (1 - state.beta_2) * grads * grads
    m_hat = m / (1 - state.beta_1 ** step)
    v_hat = v / (1 - state.beta_2 ** step)
    params = params - learning_rate * m_hat / (v_hat ** 0.5 + state.eps)
    return params, state._replace(m=m, v=v, step=step)
