"""Exact policy-gradient quantities on enumerable tabular models.

Every expectation here is a finite sum over all trajectories weighted by
their exact probabilities, so the identities it checks hold up to floating
point rounding. Returns are undiscounted.
"""
import logging
from collections import namedtuple

import numpy as np

from ..algo import discounted_returns
from ..envs.tabular import (DEFAULT_BUDGET, TabularSoftmaxPolicy, enumerate_trajectories,
                            exact_state_values, trajectory_probabilities)

ESTIMATORS = ['returns', 'min-health', 'baseline-only']

DeadScoreReport = namedtuple('DeadScoreReport', 'passed n_dead_points violations')

VarianceReport = namedtuple('VarianceReport', 'n_models n_reduced min_health returns')


def exact_objective(model, theta, budget=DEFAULT_BUDGET, table=None):
    ''' J(theta): expected undiscounted return. '''
    table = enumerate_trajectories(model, budget) if table is None else table
    probabilities = trajectory_probabilities(model, theta, table)
    return float(np.dot(probabilities, table.rewards.sum(axis=1)))


def exact_gradient_fd(model, theta, step=1e-5, budget=DEFAULT_BUDGET):
    ''' Central finite differences of exact_objective, one entry of theta at
    a time.
    '''
    if step <= 0:
        raise ValueError('step must be positive, got {}'.format(step))
    theta = np.asarray(theta, dtype=float)
    table = enumerate_trajectories(model, budget)
    grad = np.zeros_like(theta)
    for index in np.ndindex(theta.shape):
        forward, backward = np.array(theta), np.array(theta)
        forward[index] += step
        backward[index] -= step
        grad[index] = (exact_objective(model, forward, table=table) -
                       exact_objective(model, backward, table=table)) / (2.0 * step)
    return grad


def _baseline_values(model, policy, baseline):
    if baseline is None:
        return exact_state_values(model, policy)
    baseline = np.asarray(baseline, dtype=float)
    if baseline.ndim == 1:
        baseline = np.tile(baseline, (model.horizon + 1, 1))
    if baseline.shape != (model.horizon + 1, model.n_states):
        raise ValueError('baseline must have shape {}, got {}'.format(
            (model.horizon + 1, model.n_states), baseline.shape))
    return baseline


def estimator_terms(model, theta, variant, baseline=None, budget=DEFAULT_BUDGET):
    ''' Per-trajectory estimator sum_t sum_i Psi_{i,t} grad log pi(a_{i,t}|o_{i,t})
    and the trajectory probabilities.

    Returns an array of shape (K,) + theta.shape and a (K,) probability
    vector. `baseline` is a (horizon + 1, S) table of b(s, t) evaluated at
    the counterfactual state; it defaults to the exact state values.
    '''
    if variant not in ESTIMATORS:
        raise ValueError('estimator {} not avaliable, expected one of {}'.format(
            variant, ESTIMATORS))
    policy = TabularSoftmaxPolicy(theta)
    table = enumerate_trajectories(model, budget)
    probabilities = trajectory_probabilities(model, policy, table)
    K, H = table.joint_actions.shape

    states = table.states[:, :H]
    local = model.joint_actions[table.joint_actions]
    returns_to_go = discounted_returns(table.rewards, 1.0)
    scores = policy.scores(model)
    counterfactual = model.counterfactual
    baseline = _baseline_values(model, policy, baseline)
    steps = np.arange(H)[None, :]
    rows = np.repeat(np.arange(K), H)

    terms = np.zeros((K,) + policy.theta.shape)
    for i in range(model.n_agents):
        health = model.health[states, i]
        b = baseline[steps, counterfactual[states, i]]
        if variant == 'returns':
            psi = returns_to_go
        elif variant == 'min-health':
            psi = health * (returns_to_go - b)
        else:
            psi = -health * b
        contribution = psi[..., None] * scores[states, i, local[..., i]]
        np.add.at(terms[:, i], (rows, model.observations[i][states].ravel()),
                  contribution.reshape(K * H, -1))
    return terms, probabilities


def exact_estimator_expectation(model, theta, variant, baseline=None, budget=DEFAULT_BUDGET):
    ''' E[sum_t sum_i Psi_{i,t} grad log pi] computed exactly. '''
    terms, probabilities = estimator_terms(model, theta, variant, baseline, budget)
    return np.tensordot(probabilities, terms, axes=1)


def check_lemma2_pointwise(model, theta):
    ''' Every available action of a terminated agent must have an exactly
    zero score, so that h * grad log pi = grad log pi on every sample.
    Violations are (state, agent, number of available actions).
    '''
    scores = TabularSoftmaxPolicy(theta).scores(model)
    violations = []
    n_dead_points = 0
    for s, i in zip(*np.nonzero(model.health == 0.0)):
        n_dead_points += 1
        available = np.flatnonzero(model.available[s, i])
        if np.any(scores[s, i, available] != 0.0):
            violations.append((int(s), int(i), len(available)))
    if violations:
        logging.debug('dead agents with non-zero score at {}'.format(violations))
    return DeadScoreReport(not violations, n_dead_points, violations)


def estimator_variance(model, theta, variant, baseline=None, budget=DEFAULT_BUDGET):
    ''' Trace of the per-trajectory covariance of the estimator. '''
    terms, probabilities = estimator_terms(model, theta, variant, baseline, budget)
    terms = terms.reshape(len(terms), -1)
    mean = probabilities @ terms
    return float(probabilities @ np.sum((terms - mean) ** 2, axis=1))


def random_theta(model, rng, scale=1.0):
    return scale * rng.standard_normal((model.n_agents, model.n_observations,
                                        model.n_actions))


def baseline_variance_report(models, seed=0):
    ''' Compares estimator variance of min-health credit against raw returns
    on each model with a random policy. Reported, not asserted.
    '''
    rng = np.random.default_rng(seed)
    min_health, returns = [], []
    for model in models:
        theta = random_theta(model, rng)
        min_health.append(estimator_variance(model, theta, 'min-health'))
        returns.append(estimator_variance(model, theta, 'returns'))
    min_health, returns = np.array(min_health), np.array(returns)
    report = VarianceReport(len(models), int(np.sum(min_health <= returns)),
                            min_health, returns)
    logging.info('min-health variance at most raw-returns variance on {} of {} '
                 'models'.format(report.n_reduced, report.n_models))
    return report
