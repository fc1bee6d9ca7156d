import unittest
import numpy as np

from healthmarl.nn import MlpParams, MlpSpec, mlp_backward, mlp_forward, mlp_init
from healthmarl.utils import CacheMismatchError
from . import finite_difference, random_mlp, relative_error


class TestMlpSpec(unittest.TestCase):
    def test_shapes(self):
        spec = MlpSpec((3, 2, 1), 'tanh')
        self.assertEqual(spec.shapes, [(3, 2), (2,), (2, 1), (1,)])
        self.assertEqual(spec.n_params, 11)

    def test_invalid(self):
        self.assertRaises(ValueError, MlpSpec, (3, 1), ())
        self.assertRaises(ValueError, MlpSpec, (3, 0, 1), 'tanh')
        self.assertRaises(ValueError, MlpSpec, (3, 2, 1), 'relu')
        self.assertRaises(ValueError, MlpSpec, (3, 2, 2, 1), ('tanh',))


class TestMlpForward(unittest.TestCase):
    def test_zero_weights(self):
        params = MlpParams(MlpSpec((3, 5, 5, 2), 'elu'), np.zeros(MlpSpec((3, 5, 5, 2),
                                                                          'elu').n_params))
        out, _ = mlp_forward(params, np.ones(3))
        np.testing.assert_array_equal(out, np.zeros(2))

    def test_elu_closed_form(self):
        params = MlpParams(MlpSpec((1, 1, 1), 'elu'), np.array([1.0, 0.0, 1.0, 0.0]))
        out, _ = mlp_forward(params, np.array([-1.0]))
        self.assertAlmostEqual(out[0], np.exp(-1.0) - 1.0, places=15)
        self.assertAlmostEqual(out[0], -0.63212, places=5)

    def test_against_hand_computation(self):
        rng = np.random.default_rng(0)
        params = random_mlp(rng, widths=(3, 2, 1), activations=('tanh',))
        v = params.values
        W0, b0, W1, b1 = v[:6].reshape(3, 2), v[6:8], v[8:10].reshape(2, 1), v[10:]
        X = rng.normal(size=(5, 3))
        expected = np.zeros((5, 1))
        for n in range(5):
            hidden = [np.tanh(sum(X[n, k] * W0[k, j] for k in range(3)) + b0[j])
                      for j in range(2)]
            expected[n, 0] = sum(hidden[j] * W1[j, 0] for j in range(2)) + b1[0]
        out, _ = mlp_forward(params, X)
        np.testing.assert_allclose(out, expected, rtol=0, atol=1e-12)

    def test_width_mismatch(self):
        params = random_mlp(np.random.default_rng(0))
        self.assertRaises(ValueError, mlp_forward, params, np.zeros(4))

    def test_deterministic(self):
        params = random_mlp(np.random.default_rng(0))
        X = np.random.default_rng(1).normal(size=(7, 3))
        self.assertEqual(mlp_forward(params, X)[0].tobytes(),
                         mlp_forward(params, X)[0].tobytes())

    def test_init_output_gain(self):
        spec = MlpSpec((4, 8, 1), 'elu')
        params = mlp_init(spec, np.random.default_rng(0), output_gain=0.0)
        out, _ = mlp_forward(params, np.random.default_rng(1).normal(size=(6, 4)))
        np.testing.assert_array_equal(out, np.zeros((6, 1)))


class TestMlpBackward(unittest.TestCase):
    def test_last_weight_gradient_is_its_input(self):
        x, w0, b0 = 0.7, 1.3, -0.2
        params = MlpParams(MlpSpec((1, 1, 1), 'tanh'), np.array([w0, b0, 0.5, 0.1]))
        _, cache = mlp_forward(params, np.array([x]))
        grad, _ = mlp_backward(params, cache, np.array([1.0]))
        self.assertAlmostEqual(grad[2], np.tanh(w0 * x + b0), places=15)
        self.assertEqual(grad[3], 1.0)

    def test_finite_differences(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            params = random_mlp(rng)
            X = rng.normal(size=(6, 3))
            dout = rng.normal(size=(6, 2))

            def objective(values):
                return np.sum(dout * mlp_forward(MlpParams(params.spec, values), X)[0])

            grad, dX = mlp_backward(params, mlp_forward(params, X)[1], dout)
            self.assertLess(relative_error(grad, finite_difference(objective,
                                                                   params.values)), 1e-4)

            def input_objective(flat):
                return np.sum(dout * mlp_forward(params, flat.reshape(6, 3))[0])

            self.assertLess(relative_error(dX.ravel(), finite_difference(input_objective,
                                                                         X.ravel())), 1e-4)

    def test_zero_output_gradient(self):
        params = random_mlp(np.random.default_rng(3))
        _, cache = mlp_forward(params, np.ones((4, 3)))
        grad, _ = mlp_backward(params, cache, np.zeros((4, 2)))
        np.testing.assert_array_equal(grad, np.zeros(params.spec.n_params))

    def test_foreign_cache(self):
        rng = np.random.default_rng(4)
        params = random_mlp(rng)
        other = random_mlp(rng, widths=(3, 5, 2), activations=('tanh',))
        _, cache = mlp_forward(other, np.ones((2, 3)))
        self.assertRaises(CacheMismatchError, mlp_backward, params, cache, np.ones((2, 2)))
        _, cache = mlp_forward(params, np.ones((2, 3)))
        self.assertRaises(CacheMismatchError, mlp_backward, params, cache, np.ones((3, 2)))


def main():
    unittest.main()


if __name__ == '__main__':
    main()
