import numpy as np

from healthmarl.nn import MlpParams, MlpSpec


def finite_difference(f, x, step=1e-5):
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for k in range(len(x)):
        forward, backward = np.array(x), np.array(x)
        forward[k] += step
        backward[k] -= step
        grad[k] = (f(forward) - f(backward)) / (2.0 * step)
    return grad


def relative_error(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)


def random_mlp(rng, widths=(3, 4, 4, 2), activations=('tanh', 'elu'), scale=0.5):
    spec = MlpSpec(widths, activations)
    return MlpParams(spec, rng.normal(0.0, scale, spec.n_params))
