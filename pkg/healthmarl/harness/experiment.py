"""Seeded training experiments and learning curves.

Trial k of an experiment trains with seed `config.seed + k` and writes
`trial_<k>.csv` (columns episode, trial, mean_return) row by row, so an
aborted run keeps everything logged so far. The aggregate `curve.csv` has
columns episode, agg_mean, agg_min, agg_max. Numbers are written with nine
significant digits.
"""
import glob
import logging
import os
from collections import OrderedDict, namedtuple

import numpy as np
import pandas as pd
from sklearn.utils.parallel import Parallel, delayed

from .config import dump_config
from ..algo import collect_rollouts, train
from ..envs import make_env
from ..nn import Checkpoint, load_checkpoint, save_checkpoint
from ..utils import ConfigurationError, spawn_generators

FLOAT_FORMAT = '%.9g'
TRIAL_COLUMNS = ['episode', 'trial', 'mean_return']
CURVE_COLUMNS = ['episode', 'agg_mean', 'agg_min', 'agg_max']

TrialCurve = namedtuple('TrialCurve', 'trial episodes mean_returns')

EvaluationResult = namedtuple('EvaluationResult', 'mean_return returns')


class LearningCurve(namedtuple('LearningCurve',
                               'episodes trial_returns agg_mean agg_min agg_max')):
    ''' trial_returns is (n_points, n_trials); the aggregates are per point. '''
    __slots__ = ()

    def to_frame(self):
        return pd.DataFrame({'episode': self.episodes, 'agg_mean': self.agg_mean,
                             'agg_min': self.agg_min, 'agg_max': self.agg_max},
                            columns=CURVE_COLUMNS)


def aggregate_curves(trial_curves):
    ''' Pointwise mean, min and max over trials. The result does not depend
    on the order of the trials.
    '''
    trial_curves = list(trial_curves)
    if not trial_curves:
        raise ValueError('no trial curves to aggregate')
    lengths = set(len(curve.episodes) for curve in trial_curves)
    if len(lengths) != 1:
        raise ValueError('trial curves have different lengths {}'.format(sorted(lengths)))
    episodes = np.asarray(trial_curves[0].episodes)
    for curve in trial_curves[1:]:
        if not np.array_equal(curve.episodes, episodes):
            raise ValueError('trial curves are evaluated at different episodes')

    values = np.column_stack([curve.mean_returns for curve in trial_curves])
    ordered = np.sort(values, axis=1)
    return LearningCurve(episodes, values, ordered.mean(axis=1), ordered.min(axis=1),
                         ordered.max(axis=1))


def write_curve_csv(curve, path):
    curve.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def read_trial_csv(path):
    frame = pd.read_csv(path)
    if list(frame.columns) != TRIAL_COLUMNS:
        raise ValueError('{} does not have the columns {}'.format(path, TRIAL_COLUMNS))
    trial = int(frame['trial'].iloc[0]) if len(frame) else -1
    return TrialCurve(trial, frame['episode'].to_numpy(), frame['mean_return'].to_numpy())


def _append_rows(path, rows, header=False):
    frame = pd.DataFrame(rows, columns=TRIAL_COLUMNS)
    frame.to_csv(path, mode='w' if header else 'a', header=header, index=False,
                 float_format=FLOAT_FORMAT)


def make_experiment_env(config):
    if config.env == 'tabular-toy':
        raise ConfigurationError('tabular-toy is an oracle model and cannot be trained on')
    return make_env(config.env, **config.world_overrides)


def run_trial(config, trial):
    ''' Trains one trial to the episode budget; returns its TrialCurve. '''
    env = make_experiment_env(config)
    out = config.output_dir
    csv_path = os.path.join(out, 'trial_{}.csv'.format(trial))
    checkpoints = os.path.join(out, 'checkpoints')
    os.makedirs(checkpoints, exist_ok=True)
    train_config = config.train_config._replace(
        crash_checkpoint=os.path.join(checkpoints, 'trial_{}_crash.ckpt'.format(trial)))

    _append_rows(csv_path, [], header=True)
    episodes, returns = [], []

    def record(learner, stats):
        if stats.iteration % config.eval_interval == 0:
            episodes.append(stats.episodes)
            returns.append(stats.mean_return)
            _append_rows(csv_path, [(stats.episodes, trial, stats.mean_return)])
        if config.checkpoint_interval and stats.iteration % config.checkpoint_interval == 0:
            save_checkpoint(os.path.join(checkpoints, 'trial_{}_iter_{}.ckpt'.format(
                trial, stats.iteration)), learner.policy, learner.critic, env.n_agents,
                config.env, env.config)

    logging.info('{}: trial {} starts with seed {}'.format(config.env, trial,
                                                           config.seed + trial))
    learner, _ = train(env, train_config, seed=config.seed + trial, callback=record)
    save_checkpoint(os.path.join(out, 'trial_{}.ckpt'.format(trial)), learner.policy,
                    learner.critic, env.n_agents, config.env, env.config)
    return TrialCurve(trial, np.array(episodes), np.array(returns))


def run_experiment(config):
    ''' Runs config.trials independent trials, in parallel when
    config.n_jobs allows, and writes the aggregate learning curve.
    '''
    config = config.validate()
    os.makedirs(config.output_dir, exist_ok=True)
    dump_config(config, os.path.join(config.output_dir, 'config.txt'))
    curves = Parallel(n_jobs=config.n_jobs)(
        delayed(run_trial)(config, trial) for trial in range(config.trials))
    curve = aggregate_curves(curves)
    write_curve_csv(curve, os.path.join(config.output_dir, 'curve.csv'))
    logging.info('{}: {} trials done, final mean return {:.4f}'.format(
        config.env, config.trials, curve.agg_mean[-1] if len(curve.episodes) else np.nan))
    return curve


def run_campaign(config, variants):
    ''' Runs the same experiment once per crediting variant, each in
    `<output_dir>/<variant>`, and writes every aggregate curve to
    `<output_dir>/campaign.csv` with a leading variant column.
    '''
    if not variants or len(set(variants)) != len(variants):
        raise ConfigurationError('variants must be a non-empty list without repeats, '
                                 'got {}'.format(variants))
    curves = OrderedDict()
    for variant in variants:
        curves[variant] = run_experiment(config._replace(
            variant=variant, output_dir=os.path.join(config.output_dir, variant)))
    frames = [curve.to_frame() for curve in curves.values()]
    for variant, frame in zip(curves, frames):
        frame.insert(0, 'variant', variant)
    pd.concat(frames, ignore_index=True).to_csv(
        os.path.join(config.output_dir, 'campaign.csv'), index=False,
        float_format=FLOAT_FORMAT)
    return curves


def aggregate_runs(runs_dir):
    ''' Re-aggregates the trial CSV files found in runs_dir. '''
    paths = sorted(glob.glob(os.path.join(runs_dir, 'trial_*.csv')))
    if not paths:
        raise ConfigurationError('no trial_*.csv files in {}'.format(runs_dir))
    curve = aggregate_curves(read_trial_csv(path) for path in paths)
    write_curve_csv(curve, os.path.join(runs_dir, 'curve.csv'))
    return curve


def evaluate_policy(checkpoint, env, episodes, seed=None):
    ''' Mean return of the greedy (noise-free) policy over `episodes`
    episodes. `checkpoint` is a path or a loaded Checkpoint.
    '''
    if not isinstance(checkpoint, Checkpoint):
        checkpoint = load_checkpoint(checkpoint)
    widths = checkpoint.policy.mean.spec.widths
    if (widths[0] != env.observation_dim or widths[-1] != env.action_dim
            or checkpoint.n_agents != env.n_agents):
        raise ConfigurationError(
            'checkpoint for {} agents with observations {} and actions {} does not fit an '
            'environment with {}, {} and {}'.format(
                checkpoint.n_agents, widths[0], widths[-1], env.n_agents,
                env.observation_dim, env.action_dim))
    if episodes == 0:
        return EvaluationResult(float('nan'), np.zeros(0))
    returns = collect_rollouts(checkpoint.policy, env, episodes, seed,
                               greedy=True).episode_returns
    return EvaluationResult(float(returns.mean()), returns)


def random_policy_returns(env, episodes, seed=None):
    ''' Returns of a policy that samples every action uniformly from the
    action box.
    '''
    returns = np.zeros(episodes)
    for e, rng in enumerate(spawn_generators(seed, episodes)):
        state, _ = env.reset(seed=int(rng.integers(2**31)))
        for _ in range(env.episode_length):
            actions = rng.uniform(env.action_low, env.action_high,
                                  size=(env.n_agents, env.action_dim))
            state, _, reward, _ = env.step(state, actions, rng)
            returns[e] += reward
    return returns
