"""Experiment configuration files.

A config file is flat UTF-8 text of `key = value` lines with `#` comments.
Every ExperimentConfig field can be set; values are coerced with the field's
declared type and `none` clears an optional field.
"""
import configparser
import logging
from collections import OrderedDict, namedtuple
from typing import Optional

from ..algo import TrainConfig
from ..envs import SCENARIOS, world_config
from ..utils import ConfigurationError

_SECTION = 'experiment'

WORLD_OVERRIDES = ['hazard_radius', 'p_fail', 'comm_radius', 'damping', 'dt',
                   'max_force', 'episode_length']

_EXPERIMENT_FIELDS = [
    ('env', str, 'hazardous-nav'),
    ('n_agents', Optional[int], None),
    ('seed', int, 0),
    ('trials', int, 4),
    ('output_dir', str, 'runs'),
    ('checkpoint_interval', int, 10),
    ('eval_interval', int, 1),
    ('n_jobs', int, 1),
    ('hazard_radius', Optional[float], None),
    ('p_fail', Optional[float], None),
    ('comm_radius', Optional[float], None),
    ('damping', Optional[float], None),
    ('dt', Optional[float], None),
    ('max_force', Optional[float], None),
    ('episode_length', Optional[int], None),
]

FIELD_TYPES = OrderedDict((name, kind) for name, kind, _ in _EXPERIMENT_FIELDS)
FIELD_TYPES.update(TrainConfig.__annotations__)

_DEFAULTS = [default for _, _, default in _EXPERIMENT_FIELDS] + list(TrainConfig())


class ExperimentConfig(namedtuple('ExperimentConfig', list(FIELD_TYPES),
                                  defaults=_DEFAULTS)):
    ''' Environment choice, seeds, trial layout and every TrainConfig field.

    checkpoint_interval and eval_interval count training batches; a
    checkpoint_interval of 0 only keeps the final checkpoint.
    '''
    __slots__ = ()

    @property
    def train_config(self):
        return TrainConfig(**{name: getattr(self, name) for name in TrainConfig._fields})

    @property
    def world_overrides(self):
        overrides = {name: getattr(self, name) for name in WORLD_OVERRIDES}
        overrides['n_agents'] = self.n_agents
        return overrides

    def validate(self):
        if self.env not in SCENARIOS:
            raise ConfigurationError('unknown env {!r}, expected one of {}'.format(
                self.env, SCENARIOS))
        if self.trials < 1:
            raise ConfigurationError('trials must be at least 1, got {}'.format(self.trials))
        if self.checkpoint_interval < 0 or self.eval_interval < 1:
            raise ConfigurationError('checkpoint_interval must be nonnegative and '
                                     'eval_interval positive')
        if self.n_jobs == 0:
            raise ConfigurationError('n_jobs cannot be 0')
        if self.env != 'tabular-toy':
            world_config(self.env, **self.world_overrides)
        self.train_config.validate()
        return self


def _coerce(name, text):
    kind = FIELD_TYPES[name]
    text = text.strip()
    arguments = getattr(kind, '__args__', None)
    if arguments is not None:
        if text.lower() in ('none', ''):
            return None
        kind = arguments[0]
    try:
        if kind is bool:
            lowered = text.lower()
            if lowered not in configparser.ConfigParser.BOOLEAN_STATES:
                raise ValueError(text)
            return configparser.ConfigParser.BOOLEAN_STATES[lowered]
        if kind is tuple:
            return tuple(int(w) for w in text.strip('()[] ').split(',') if w.strip())
        return kind(text)
    except ValueError:
        raise ConfigurationError('cannot read {} = {!r} as {}'.format(
            name, text, getattr(kind, '__name__', kind)))


def parse_config(text, **overrides):
    ''' ExperimentConfig from the text of a config file; non-None overrides
    win over file values.
    '''
    parser = configparser.ConfigParser(comment_prefixes=('#',), inline_comment_prefixes=('#',),
                                       interpolation=None)
    try:
        parser.read_string('[{}]\n{}'.format(_SECTION, text))
    except configparser.Error as err:
        raise ConfigurationError('malformed config: {}'.format(err))

    values = {}
    for key, text_value in parser.items(_SECTION):
        name = key.replace('-', '_')
        if name not in FIELD_TYPES:
            raise ConfigurationError('unknown config key {!r}'.format(key))
        values[name] = _coerce(name, text_value)
    for name, value in overrides.items():
        if name not in FIELD_TYPES:
            raise ConfigurationError('unknown config key {!r}'.format(name))
        if value is not None:
            values[name] = value
    logging.debug('experiment config values {}'.format(values))
    return ExperimentConfig(**values).validate()


def load_config(path=None, **overrides):
    text = ''
    if path is not None:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    return parse_config(text, **overrides)


def dump_config(config, path):
    ''' Writes config in the format load_config reads. '''
    with open(path, 'w', encoding='utf-8') as f:
        for name, value in zip(config._fields, config):
            if isinstance(value, tuple):
                value = ', '.join(str(v) for v in value)
            f.write('{} = {}\n'.format(name, 'none' if value is None else value))
    return path
