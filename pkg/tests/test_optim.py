"""
Unit tests for the Adam optimizer, gradient clipping and the finite-difference checker.
"""

import unittest

import numpy as np

from app.errors import ConfigError, OptimizationError, ShapeError
from app.imaginet import optim
from app.models.adam_state import AdamState
from app.models.grad_check_report import GradCheckReport


class TestAdam(unittest.TestCase):
    """Tests for optim.adam_step."""

    def test_zero_gradient_keeps_parameters(self):
        """Zero gradients leave every parameter unchanged."""
        params = {"w": np.array([[1.0, -2.0]])}
        state = AdamState(lr=0.1)
        for _ in range(3):
            params, state = optim.adam_step(state, params, {"w": np.zeros((1, 2))})
        np.testing.assert_array_equal(params["w"], [[1.0, -2.0]])
        self.assertEqual(state.step_count, 3)

    def test_first_step_moves_by_lr(self):
        """After bias correction the first update has magnitude lr in the gradient's direction."""
        params = {"w": np.array([[0.0, 0.0, 0.0]])}
        state = AdamState(lr=0.01)
        updated, _ = optim.adam_step(state, params, {"w": np.array([[3.0, -0.5, 1e-3]])})
        np.testing.assert_allclose(updated["w"], [[-0.01, 0.01, -0.01]], rtol=1e-4)

    def test_inputs_are_not_mutated(self):
        """adam_step returns new arrays."""
        w = np.array([[1.0]])
        optim.adam_step(AdamState(lr=0.1), {"w": w}, {"w": np.array([[1.0]])})
        self.assertEqual(w[0, 0], 1.0)

    def test_sign_update_with_zero_betas(self):
        """With beta1 = beta2 = 0 every step has size lr whatever the gradient scale."""
        state = AdamState(lr=0.5, beta1=0.0, beta2=0.0, eps=0.0)
        params = {"x": np.array([[10.0]])}
        for scale in (1e-6, 1.0, 1e6):
            before = params["x"][0, 0]
            params, state = optim.adam_step(state, params, {"x": np.array([[scale]])})
            self.assertAlmostEqual(before - params["x"][0, 0], 0.5)

    def test_minimises_quadratic(self):
        """Repeated steps drive a quadratic towards its minimum."""
        params = {"x": np.array([[5.0, -3.0]])}
        state = AdamState(lr=0.1)
        for _ in range(500):
            params, state = optim.adam_step(state, params, {"x": 2.0 * params["x"]})
        self.assertLess(np.abs(params["x"]).max(), 0.1)

    def test_nan_gradient_names_tensor(self):
        """Non-finite gradients raise OptimizationError naming the tensor."""
        with self.assertRaises(OptimizationError) as ctx:
            optim.adam_step(
                AdamState(lr=0.1),
                {"V": np.zeros((1, 1))},
                {"V": np.array([[np.nan]])},
            )
        self.assertIn("V", str(ctx.exception))

    def test_shape_mismatch(self):
        """Gradients must match their parameters."""
        with self.assertRaises(ShapeError):
            optim.adam_step(AdamState(lr=0.1), {"w": np.zeros((2, 2))}, {"w": np.zeros((2, 3))})

    def test_deterministic(self):
        """Identical inputs yield bit-identical trajectories."""

        def run():
            params, state = {"w": np.array([[0.3, -0.1]])}, AdamState(lr=0.01)
            for i in range(20):
                params, state = optim.adam_step(state, params, {"w": np.sin(params["w"] + i)})
            return params["w"]

        np.testing.assert_array_equal(run(), run())


class TestClipGradNorm(unittest.TestCase):
    """Tests for optim.clip_grad_norm."""

    def test_rescales_to_max_norm(self):
        """Gradients above the limit are scaled to exactly the limit."""
        grads = {"a": np.array([[3.0]]), "b": np.array([[4.0]])}
        clipped, norm = optim.clip_grad_norm(grads, 1.0)
        self.assertEqual(norm, 5.0)
        np.testing.assert_allclose(clipped["a"], [[0.6]])
        np.testing.assert_allclose(clipped["b"], [[0.8]])

    def test_disabled_or_below_limit(self):
        """No limit, or a norm under it, returns the gradients unchanged."""
        grads = {"a": np.array([[0.1]])}
        self.assertIs(optim.clip_grad_norm(grads, None)[0], grads)
        self.assertIs(optim.clip_grad_norm(grads, 1.0)[0], grads)


class TestGradCheck(unittest.TestCase):
    """Tests for optim.grad_check and the report model."""

    def test_quadratic_is_exact(self):
        """Central differences are exact for x^2 at x = 3."""
        params = {"x": np.array([[3.0]])}
        report = optim.grad_check(
            lambda t: float(t["x"][0, 0] ** 2), params, 1e-5, {"x": np.array([[6.0]])}
        )
        self.assertLess(report.max_error, 1e-9)
        self.assertEqual(report.n_coordinates, 1)

    def test_corrupted_gradient_is_detected(self):
        """Doubling a gradient gives a relative error of one half."""
        params = {"x": np.array([[1.0, 2.0, -1.5]])}
        true_grad = np.cos(params["x"])
        report = optim.grad_check(
            lambda t: float(np.sin(t["x"]).sum()), params, 1e-5, {"x": 2.0 * true_grad}
        )
        self.assertGreater(report.max_error, 0.3)
        self.assertFalse(report.passed(1e-4))

    def test_samples_large_tensors(self):
        """At most coords_per_tensor coordinates are compared per tensor."""
        params = {"w": np.ones((10, 10))}
        report = optim.grad_check(
            lambda t: float((t["w"] ** 2).sum()), params, 1e-5, {"w": 2.0 * np.ones((10, 10))},
            coords_per_tensor=30,
        )
        self.assertEqual(report.n_coordinates, 30)
        self.assertLess(report.max_error, 1e-8)

    def test_epsilon_range(self):
        """Steps outside [1e-7, 1e-3] are rejected."""
        with self.assertRaises(ConfigError):
            optim.grad_check(lambda t: 0.0, {"x": np.zeros((1, 1))}, 0.1, {"x": np.zeros((1, 1))})

    def test_relative_error_floor(self):
        """Two zeros have zero relative error."""
        self.assertEqual(optim.relative_error(0.0, 0.0), 0.0)
        self.assertAlmostEqual(optim.relative_error(1.0, 2.0), 0.5)

    def test_report_merge_keeps_worst(self):
        """Merging keeps the larger error per tensor and sums coordinates."""
        a = GradCheckReport(per_tensor={"V": 1e-6, "L": 1e-9}, n_coordinates=10, epsilon=1e-5)
        b = GradCheckReport(per_tensor={"V": 1e-8, "L": 1e-5}, n_coordinates=5, epsilon=1e-5)
        merged = a.merge(b)
        self.assertEqual(merged.per_tensor, {"V": 1e-6, "L": 1e-5})
        self.assertEqual(merged.n_coordinates, 15)
        self.assertEqual(merged.max_error, 1e-5)


if __name__ == "__main__":
    unittest.main()
