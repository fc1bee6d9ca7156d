from collections import namedtuple

import numpy as np

from .mlp import MlpSpec, mlp_backward, mlp_forward, mlp_init
from ..utils import ConfigurationError

CRITIC_KINDS = ['central', 'local']


class CriticParams(namedtuple('CriticParams', 'mlp kind')):
    ''' State-value network. A central critic reads joint-state features
    (health included), a local critic reads one agent's observation.
    '''
    __slots__ = ()

    def __new__(cls, mlp, kind='central'):
        if kind not in CRITIC_KINDS:
            raise ConfigurationError('critic kind {} not avaliable'.format(kind))
        if mlp.spec.widths[-1] != 1:
            raise ConfigurationError('a critic has a single output, got {}'.format(
                mlp.spec.widths[-1]))
        return super(CriticParams, cls).__new__(cls, mlp, kind)

    @property
    def input_dim(self):
        return self.mlp.spec.widths[0]


def critic_init(input_dim, rng, kind='central', hidden=(64,) * 8, activation='elu'):
    ''' The output layer starts at zero, so V is identically 0 before the
    first update.
    '''
    spec = MlpSpec((input_dim,) + tuple(hidden) + (1,), activation)
    return CriticParams(mlp_init(spec, rng, output_gain=0.0), kind)


def critic_values(critic, X):
    ''' Values of every row of X, keeping the leading axes. '''
    X = np.asarray(X, dtype=float)
    out, _ = mlp_forward(critic.mlp, X.reshape(-1, X.shape[-1]))
    return out[:, 0].reshape(X.shape[:-1])


def critic_value_grad(critic, X, dvalues):
    ''' Flat parameter gradient of sum(dvalues * V(X)) for a 2-D X. '''
    out, cache = mlp_forward(critic.mlp, X)
    grad, _ = mlp_backward(critic.mlp, cache, np.asarray(dvalues, dtype=float)[:, None])
    return grad
