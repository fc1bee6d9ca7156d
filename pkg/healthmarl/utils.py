import numpy as np

LOG_STD_MIN = -5.0
LOG_STD_MAX = 2.0


class ConfigurationError(ValueError):
    pass


class EpisodeFinishedError(RuntimeError):
    pass


class CacheMismatchError(RuntimeError):
    pass


class EnumerationBudgetError(RuntimeError):
    pass


class NonFiniteError(FloatingPointError):
    def __init__(self, message, index=None):
        super(NonFiniteError, self).__init__(message)
        self.index = index


def clip_log_std(log_std):
    return np.clip(log_std, LOG_STD_MIN, LOG_STD_MAX)


def clip_actions(actions, low=-1.0, high=1.0):
    return np.clip(actions, low, high)


def check_finite(X, what='array'):
    ''' Raises NonFiniteError pointing at the first non-finite entry of X.
    '''
    X = np.asarray(X)
    bad = ~np.isfinite(X)
    if np.any(bad):
        index = np.unravel_index(np.argmax(bad), X.shape) if X.ndim else ()
        raise NonFiniteError('{} has a non-finite entry at {}'.format(what, index),
                             index=index)
    return X


def as_seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        return np.random.SeedSequence(seed.integers(0, 2**63 - 1))
    return np.random.SeedSequence(seed)


def spawn_generators(seed, count):
    ''' Splits `seed` into `count` independent generators; the i-th stream
    only depends on `seed` and i.
    '''
    children = as_seed_sequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]
