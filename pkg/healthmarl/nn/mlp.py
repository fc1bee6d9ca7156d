from collections import namedtuple

import numpy as np

from ..utils import CacheMismatchError

ACTIVATIONS = ['tanh', 'elu']


class MlpSpec(namedtuple('MlpSpec', 'widths activations')):
    ''' Layer widths (input, hidden..., output) and one activation tag per
    hidden layer; the output layer is linear.
    '''
    __slots__ = ()

    def __new__(cls, widths, activations):
        widths = tuple(int(w) for w in widths)
        if isinstance(activations, str):
            activations = (activations,) * (len(widths) - 2)
        activations = tuple(activations)
        if len(widths) < 3:
            raise ValueError('an MLP needs at least one hidden layer, got widths {}'.format(widths))
        if min(widths) < 1:
            raise ValueError('layer widths must be positive, got {}'.format(widths))
        if len(activations) != len(widths) - 2:
            raise ValueError('{} activations for {} hidden layers'.format(
                len(activations), len(widths) - 2))
        for activation in activations:
            if activation not in ACTIVATIONS:
                raise ValueError('activation {} not avaliable'.format(activation))
        return super(MlpSpec, cls).__new__(cls, widths, activations)

    @property
    def shapes(self):
        ''' Parameter tensor shapes in declaration order: W0, b0, W1, b1, ... '''
        shapes = []
        for fan_in, fan_out in zip(self.widths[:-1], self.widths[1:]):
            shapes.extend([(fan_in, fan_out), (fan_out,)])
        return shapes

    @property
    def n_params(self):
        return int(sum(np.prod(shape) for shape in self.shapes))


MlpParams = namedtuple('MlpParams', 'spec values')

MlpCache = namedtuple('MlpCache', 'spec n_params inputs pre_activations')


def _layers(params):
    ''' (W, b) views into the flat parameter vector. '''
    layers = []
    offset = 0
    shapes = params.spec.shapes
    for w_shape, b_shape in zip(shapes[::2], shapes[1::2]):
        size = w_shape[0] * w_shape[1]
        W = params.values[offset:offset + size].reshape(w_shape)
        offset += size
        b = params.values[offset:offset + b_shape[0]]
        offset += b_shape[0]
        layers.append((W, b))
    return layers


def _activate(Z, activation):
    if activation == 'tanh':
        return np.tanh(Z)
    return np.where(Z > 0.0, Z, np.expm1(np.minimum(Z, 0.0)))


def _activation_derivative(Z, activation):
    if activation == 'tanh':
        return 1.0 - np.tanh(Z) ** 2
    return np.where(Z > 0.0, 1.0, np.exp(np.minimum(Z, 0.0)))


def mlp_init(spec, rng, output_gain=1.0):
    ''' Fan-in scaled uniform weights, zero biases; the output layer is
    multiplied by output_gain.
    '''
    values = []
    n_layers = len(spec.widths) - 1
    for layer, (fan_in, fan_out) in enumerate(zip(spec.widths[:-1], spec.widths[1:])):
        bound = 1.0 / np.sqrt(fan_in)
        W = rng.uniform(-bound, bound, size=(fan_in, fan_out))
        if layer == n_layers - 1:
            W = W * output_gain
        values.extend([W.ravel(), np.zeros(fan_out)])
    return MlpParams(spec, np.concatenate(values))


def mlp_forward(params, X):
    X = np.asarray(X, dtype=float)
    if X.shape[-1] != params.spec.widths[0]:
        raise ValueError('input width {} does not match the network input {}'.format(
            X.shape[-1], params.spec.widths[0]))
    single = X.ndim == 1
    A = np.atleast_2d(X)
    inputs, pre_activations = [], []
    layers = _layers(params)
    for (W, b), activation in zip(layers[:-1], params.spec.activations):
        Z = A @ W + b
        inputs.append(A)
        pre_activations.append(Z)
        A = _activate(Z, activation)
    W, b = layers[-1]
    inputs.append(A)
    out = A @ W + b
    cache = MlpCache(params.spec, len(params.values), inputs, pre_activations)
    return (out[0] if single else out), cache


def mlp_backward(params, cache, dout):
    ''' Reverse-mode pass; returns (flat parameter gradient, input gradient). '''
    if cache.spec != params.spec or cache.n_params != len(params.values):
        raise CacheMismatchError('cache was produced by a different network')
    dZ = np.atleast_2d(np.asarray(dout, dtype=float))
    if dZ.shape != (len(cache.inputs[-1]), params.spec.widths[-1]):
        raise CacheMismatchError('output gradient of shape {} does not match the cached '
                                 'batch'.format(np.shape(dout)))
    layers = _layers(params)
    grads = []
    for layer in range(len(layers) - 1, -1, -1):
        W, _ = layers[layer]
        A = cache.inputs[layer]
        grads.append((A.T @ dZ, dZ.sum(axis=0)))
        dA = dZ @ W.T
        if layer > 0:
            dZ = dA * _activation_derivative(cache.pre_activations[layer - 1],
                                             params.spec.activations[layer - 1])
    flat = np.concatenate([np.concatenate([dW.ravel(), db]) for dW, db in reversed(grads)])
    dX = dA[0] if np.ndim(dout) == 1 else dA
    return flat, dX
