"""Command-line entry point: python -m healthmarl <command> ...

Exit status is 0 on success, 1 when a verification or property check fails
and 2 on configuration errors.
"""
import argparse
import logging
import sys

import numpy as np
import pandas as pd

from .config import load_config
from .experiment import (CURVE_COLUMNS, aggregate_runs, evaluate_policy, run_campaign,
                         run_experiment)
from ..algo import VARIANTS
from ..core import validate_health_properties
from ..envs import (SCENARIOS, ParticleWorldConfig, TabularDecPomdp, check_health_structure,
                    make_env, make_world)
from ..nn import load_checkpoint
from ..oracle import run_verification_suite
from ..utils import ConfigurationError


def _train(args):
    config = load_config(args.config, env=args.env, n_agents=args.agents,
                         variant=args.variant, seed=args.seed,
                         total_episodes=args.episodes, trials=args.trials,
                         n_jobs=args.jobs, output_dir=args.out)
    if args.variants:
        if args.variant is not None:
            raise ConfigurationError('pass either --variant or --variants, not both')
        curves = run_campaign(config, args.variants)
        rows = [(variant, curve.episodes[-1], curve.agg_mean[-1], curve.agg_min[-1],
                 curve.agg_max[-1]) for variant, curve in curves.items()]
        print(pd.DataFrame(rows, columns=['variant'] + CURVE_COLUMNS).to_string(index=False))
        return 0
    curve = run_experiment(config)
    print(curve.to_frame().tail(1).to_string(index=False))
    return 0


def _verify(args):
    results = run_verification_suite(budget=args.budget, seed=args.seed,
                                     n_models=args.models, n_points=args.points)
    table = pd.DataFrame(results, columns=results[0]._fields)
    print(table.to_string(index=False))
    if args.report:
        table.to_csv(args.report, index=False, float_format='%.9g')
    return 0 if all(r.passed for r in results if r.required) else 1


def _check_env(args):
    env = make_env(args.env, n_agents=args.agents)
    if isinstance(env, TabularDecPomdp):
        violations = check_health_structure(env)
        print('revivals: {}'.format(violations or 'none'))
        return 1 if violations else 0
    report = validate_health_properties(env, num_samples=args.samples, seed=args.seed)
    rows = [(name, getattr(report, name), len(report.counterexamples[name]))
            for name in ['min_health', 'reachable_set', 'available_actions',
                         'observable_set']]
    print(pd.DataFrame(rows, columns=['property', 'passed', 'counterexamples'])
          .to_string(index=False))
    for name, examples in report.counterexamples.items():
        for example in examples:
            print('{}: {}'.format(name, example))
    return 0 if report.passed else 1


def _eval(args):
    checkpoint = load_checkpoint(args.checkpoint)
    name = args.env or checkpoint.scenario
    if name is None:
        raise ConfigurationError('the checkpoint does not name its scenario, pass --env')
    if checkpoint.world is not None and name == checkpoint.scenario:
        env = make_world(ParticleWorldConfig.from_dict(checkpoint.world))
    else:
        logging.warning('{}: no recorded world parameters, evaluating in the default '
                        'world'.format(name))
        env = make_env(name, n_agents=checkpoint.n_agents)
    result = evaluate_policy(checkpoint, env, args.episodes, args.seed)
    std = float(np.std(result.returns)) if len(result.returns) else float('nan')
    print('episodes {} mean return {:.9g} std {:.9g}'.format(
        len(result.returns), result.mean_return, std))
    return 0


def _aggregate(args):
    curve = aggregate_runs(args.runs)
    print(curve.to_frame().to_string(index=False))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog='healthmarl',
                                     description='Health-informed multi-agent PPO')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true')
    verbosity.add_argument('-q', '--quiet', action='store_true')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    train = commands.add_parser('train', help='run a seeded training experiment')
    train.add_argument('--config', default=None)
    train.add_argument('--env', choices=SCENARIOS, default=None)
    train.add_argument('--agents', type=int, default=None)
    train.add_argument('--variant', default=None)
    train.add_argument('--variants', nargs='+', choices=VARIANTS, default=None,
                       help='train every listed variant, each in <out>/<variant>')
    train.add_argument('--seed', type=int, default=None)
    train.add_argument('--episodes', type=int, default=None)
    train.add_argument('--trials', type=int, default=None)
    train.add_argument('--jobs', type=int, default=None)
    train.add_argument('--out', default=None)
    train.set_defaults(run=_train)

    verify = commands.add_parser('verify', help='exact oracle checks')
    verify.add_argument('--budget', type=int, default=int(1e7))
    verify.add_argument('--seed', type=int, default=0)
    verify.add_argument('--models', type=int, default=20)
    verify.add_argument('--points', type=int, default=100)
    verify.add_argument('--report', default='verify_report.csv')
    verify.set_defaults(run=_verify)

    check = commands.add_parser('check-env', help='health property checks')
    check.add_argument('--env', choices=SCENARIOS, required=True)
    check.add_argument('--agents', type=int, default=None)
    check.add_argument('--samples', type=int, default=10000)
    check.add_argument('--seed', type=int, default=0)
    check.set_defaults(run=_check_env)

    evaluate = commands.add_parser('eval', help='greedy evaluation of a checkpoint')
    evaluate.add_argument('--checkpoint', required=True)
    evaluate.add_argument('--env', choices=SCENARIOS, default=None)
    evaluate.add_argument('--episodes', type=int, default=100)
    evaluate.add_argument('--seed', type=int, default=0)
    evaluate.set_defaults(run=_eval)

    aggregate = commands.add_parser('aggregate', help='re-aggregate trial CSV files')
    aggregate.add_argument('--runs', required=True)
    aggregate.set_defaults(run=_aggregate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(message)s')
    try:
        return args.run(args)
    except ConfigurationError as err:
        logging.error(err)
        return 2


if __name__ == '__main__':
    sys.exit(main())
