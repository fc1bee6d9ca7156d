"""Binary checkpoints of a policy/critic pair.

The file starts with one UTF-8 JSON header line (format tag, version, layer
widths, activation tags, agent count, scenario, world parameters and the
tensor list), followed by the raw little-endian float64 bytes of every tensor
in declaration order: policy W0, b0, ..., log_std, then critic W0, b0, ...
"""
import json
import logging
from collections import namedtuple

import numpy as np

from .critic import CriticParams
from .gaussian import PolicyParams
from .mlp import MlpParams, MlpSpec
from ..utils import ConfigurationError

FORMAT = 'healthmarl-checkpoint'
VERSION = 1
DTYPE = '<f8'

Checkpoint = namedtuple('Checkpoint', 'policy critic n_agents scenario world',
                        defaults=(None, None))


def _tensors(prefix, params):
    tensors, offset = [], 0
    for k, shape in enumerate(params.spec.shapes):
        size = int(np.prod(shape))
        name = '{}.{}{}'.format(prefix, 'W' if k % 2 == 0 else 'b', k // 2)
        tensors.append((name, list(shape), params.values[offset:offset + size]))
        offset += size
    return tensors


def save_checkpoint(path, policy, critic, n_agents, scenario=None, world=None):
    ''' world is the ParticleWorldConfig (or its dict) the policy was trained
    in; eval rebuilds the environment from it.
    '''
    if hasattr(world, '_asdict'):
        world = world._asdict()
    tensors = _tensors('policy', policy.mean)
    tensors.append(('policy.log_std', [len(policy.log_std)], policy.log_std))
    tensors.extend(_tensors('critic', critic.mlp))
    header = {
        'format': FORMAT,
        'version': VERSION,
        'n_agents': int(n_agents),
        'scenario': scenario,
        'world': None if world is None else dict(world),
        'policy': {'widths': list(policy.mean.spec.widths),
                   'activations': list(policy.mean.spec.activations)},
        'critic': {'widths': list(critic.mlp.spec.widths),
                   'activations': list(critic.mlp.spec.activations),
                   'kind': critic.kind},
        'tensors': [{'name': name, 'shape': shape} for name, shape, _ in tensors],
    }
    with open(path, 'wb') as f:
        f.write(json.dumps(header, sort_keys=True).encode('utf-8') + b'\n')
        for _, _, values in tensors:
            f.write(np.ascontiguousarray(values, dtype=DTYPE).tobytes())
    logging.debug('checkpoint written to {}'.format(path))
    return path


def load_checkpoint(path):
    with open(path, 'rb') as f:
        line = f.readline()
        payload = f.read()
    try:
        header = json.loads(line.decode('utf-8'))
    except ValueError:
        raise ConfigurationError('{} is not a checkpoint'.format(path))
    if header.get('format') != FORMAT or header.get('version') != VERSION:
        raise ConfigurationError('unsupported checkpoint format {} v{}'.format(
            header.get('format'), header.get('version')))

    values = np.frombuffer(payload, dtype=DTYPE).astype(float)
    policy_spec = MlpSpec(header['policy']['widths'], header['policy']['activations'])
    critic_spec = MlpSpec(header['critic']['widths'], header['critic']['activations'])
    n_log_std = policy_spec.widths[-1]
    expected = policy_spec.n_params + n_log_std + critic_spec.n_params
    if len(values) != expected:
        raise ConfigurationError('checkpoint holds {} values, header declares {}'.format(
            len(values), expected))

    n = policy_spec.n_params
    policy = PolicyParams(MlpParams(policy_spec, values[:n]), values[n:n + n_log_std])
    critic = CriticParams(MlpParams(critic_spec, values[n + n_log_std:]),
                          header['critic']['kind'])
    return Checkpoint(policy, critic, header['n_agents'], header.get('scenario'),
                      header.get('world'))
