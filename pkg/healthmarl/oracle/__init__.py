from .exact import (ESTIMATORS, DeadScoreReport, VarianceReport, baseline_variance_report,
                    check_lemma2_pointwise, estimator_terms, estimator_variance,
                    exact_estimator_expectation, exact_gradient_fd, exact_objective,
                    random_theta)
from .autodiff import exact_gradient_autodiff
from .gradcheck import GradientCheck, check_gradients, finite_difference, relative_error
from .suite import CheckResult, run_verification_suite
