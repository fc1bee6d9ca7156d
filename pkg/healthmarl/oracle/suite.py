import logging
import time
from collections import namedtuple

import numpy as np

from .autodiff import exact_gradient_autodiff
from .exact import (baseline_variance_report, check_lemma2_pointwise,
                    exact_estimator_expectation, exact_gradient_fd, random_theta)
from .gradcheck import CHECKS as GRADIENT_CHECKS, relative_error
from ..algo import compute_gae
from ..envs.tabular import DEFAULT_BUDGET, random_tabular_model

CheckResult = namedtuple('CheckResult', 'name passed value threshold seconds required')

# variance comparison runs on rewards with a positive mean
VARIANCE_REWARD_OFFSET = 1.0


def _models(seed, count, **kwargs):
    seeds = np.random.SeedSequence(seed).spawn(count)
    return [random_tabular_model(s, **kwargs).validate() for s in seeds]


def _baseline_bias(models, rng, budget):
    worst = 0.0
    for model in models:
        g_b = exact_estimator_expectation(model, random_theta(model, rng), 'baseline-only',
                                          budget=budget)
        worst = max(worst, float(np.max(np.abs(g_b))))
    return worst


def _binary_health_equivalence(models, rng, budget):
    worst, pointwise = 0.0, True
    for model in models:
        theta = random_theta(model, rng)
        difference = (exact_estimator_expectation(model, theta, 'min-health', budget=budget) -
                      exact_estimator_expectation(model, theta, 'returns', budget=budget))
        worst = max(worst, float(np.max(np.abs(difference))))
        pointwise = pointwise and check_lemma2_pointwise(model, theta).passed
    return worst if pointwise else np.inf


def _estimator_identity(models, rng, budget):
    worst = 0.0
    for model in models:
        theta = random_theta(model, rng)
        fd = exact_gradient_fd(model, theta, budget=budget)
        expected = exact_estimator_expectation(model, theta, 'returns', budget=budget)
        autodiff = exact_gradient_autodiff(model, theta, budget=budget)
        worst = max(worst, relative_error(expected, fd), relative_error(autodiff, fd))
    return worst


def _gae_reduction(rng, n_sequences=1000, horizon=50):
    rewards = rng.normal(size=(n_sequences, horizon))
    advantages = compute_gae(rewards, np.zeros((n_sequences, horizon + 1)), 1.0, 1.0)
    returns = np.cumsum(rewards[:, ::-1], axis=1)[:, ::-1]
    return float(np.max(np.abs(advantages - returns)))


def run_verification_suite(budget=DEFAULT_BUDGET, seed=0, n_models=20, n_points=100):
    ''' Runs every exact check and returns a list of CheckResult. Checks with
    required=False are reported without affecting the outcome.
    '''
    rng = np.random.default_rng(seed)
    gradient_rng = np.random.default_rng(seed + 1)
    models = _models(seed, n_models)
    checks = [
        ('baseline term has zero expectation', lambda: _baseline_bias(models, rng, budget), 1e-10),
        ('min-health equals returns under binary health',
         lambda: _binary_health_equivalence(models, rng, budget), 1e-10),
        ('returns estimator equals exact gradient',
         lambda: _estimator_identity(models[:10], rng, budget), 1e-6),
    ]
    for name, error in GRADIENT_CHECKS:
        checks.append(('finite differences: {}'.format(name),
                       lambda error=error: max(error(gradient_rng) for _ in range(n_points)),
                       1e-4))
    checks.append(('GAE reduces to returns', lambda: _gae_reduction(rng), 1e-8))

    results = []
    for name, run, threshold in checks:
        start = time.time()
        value = run()
        results.append(CheckResult(name, bool(value < threshold), value, threshold,
                                   time.time() - start, True))
        logging.info('{}: {} ({:.3e} < {:.0e}, {:.2f}s)'.format(
            name, 'pass' if results[-1].passed else 'FAIL', value, threshold,
            results[-1].seconds))

    start = time.time()
    variance = baseline_variance_report(
        _models(seed, n_models, reward_offset=VARIANCE_REWARD_OFFSET), seed)
    needed = int(np.ceil(0.75 * n_models))
    results.append(CheckResult('min-health variance not above returns (models)',
                               variance.n_reduced >= needed, variance.n_reduced, needed,
                               time.time() - start, False))
    return results
