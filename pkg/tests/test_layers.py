"""
Unit tests for activations, the GRU cell and the output heads.
"""

import unittest

import numpy as np

from app.errors import ShapeError, VocabularyError
from app.imaginet import layers
from app.imaginet.numcore import make_rng
from app.models.activation_config import ActivationConfig
from app.models.gru_params import GruParams


def small_gru(seed=0, input_dim=3, hidden_dim=4, scale=0.5):
    """Random GRU with moderate weights."""
    return GruParams.initialize(input_dim, hidden_dim, scale, make_rng(seed))


class TestActivations(unittest.TestCase):
    """Tests for the steep sigmoid and the clipped rectifier."""

    def test_steep_sigmoid_midpoint_and_slope(self):
        """sig(0) = 0.5 and the slope at 0 is 3.75 / 4."""
        self.assertEqual(float(layers.steep_sigmoid(0.0)), 0.5)
        h = 1e-6
        slope = (layers.steep_sigmoid(h) - layers.steep_sigmoid(-h)) / (2 * h)
        self.assertAlmostEqual(float(slope), 3.75 / 4, places=6)

    def test_steep_sigmoid_extremes_are_finite(self):
        """Large inputs saturate without overflow."""
        out = layers.steep_sigmoid(np.array([-1e4, 1e4]))
        np.testing.assert_array_equal(out, [0.0, 1.0])

    def test_steep_sigmoid_is_strictly_increasing(self):
        """Sorted distinct inputs give strictly increasing outputs."""
        z = np.linspace(-3.0, 3.0, 601)
        self.assertTrue(np.all(np.diff(layers.steep_sigmoid(z)) > 0))

    def test_clipped_relu_bounds(self):
        """Negative inputs map to 0 and large ones to 5."""
        out = layers.clipped_relu(np.array([-2.0, 0.0, 1.5, 7.0]))
        np.testing.assert_array_equal(out, [0.0, 0.0, 1.5, 5.0])

    def test_clipped_relu_custom_bounds(self):
        """Clip bounds come from the activation config."""
        cfg = ActivationConfig(gate_slope=1.0, clip_lo=0.0, clip_hi=1.0)
        np.testing.assert_array_equal(layers.clipped_relu(np.array([0.5, 3.0]), cfg), [0.5, 1.0])

    def test_clipped_relu_slope_is_zero_at_kinks(self):
        """Outputs at 0 or at the upper bound have zero subgradient."""
        slope = layers.clipped_relu_slope(np.array([0.0, 2.0, 5.0]))
        np.testing.assert_array_equal(slope, [0.0, 1.0, 0.0])


class TestGru(unittest.TestCase):
    """Tests for the GRU forward step and backpropagation through time."""

    def test_zero_state_zero_input_stays_zero(self):
        """Without biases a zero input keeps a zero state at zero."""
        p = small_gru()
        trace = layers.gru_step(p, np.zeros(4), np.zeros(3))
        np.testing.assert_array_equal(trace.h, np.zeros(4))
        np.testing.assert_array_equal(trace.z, np.full(4, 0.5))

    def test_hidden_state_is_gated_interpolation(self):
        """h = (1 - z) h_prev + z h_cand for every unit."""
        p = small_gru(seed=4)
        rng = make_rng(9)
        h_prev = rng.uniform(0, 1, size=4)
        trace = layers.gru_step(p, h_prev, rng.uniform(-1, 1, size=3))
        np.testing.assert_allclose(trace.h, (1 - trace.z) * h_prev + trace.z * trace.h_cand)
        self.assertTrue(np.all((trace.h_cand >= 0) & (trace.h_cand <= 5)))

    def test_state_stays_in_clip_range(self):
        """Previous states in [0, 5] give new states in [0, 5]."""
        rng = make_rng(21)
        for seed in range(10):
            p = small_gru(seed=seed, scale=2.0)
            for _ in range(20):
                trace = layers.gru_step(p, rng.uniform(0, 5, size=4), rng.uniform(-3, 3, size=3))
                self.assertTrue(np.all((trace.h >= 0.0) & (trace.h <= 5.0 + 1e-12)))

    def test_gru_step_shape_checks(self):
        """Mismatched inputs raise ShapeError."""
        with self.assertRaises(ShapeError):
            layers.gru_step(small_gru(), np.zeros(4), np.zeros(5))
        with self.assertRaises(ShapeError):
            layers.gru_step(small_gru(), np.zeros(3), np.zeros(3))

    def test_run_gru_length(self):
        """One trace per input, chained through h_prev."""
        xs = list(make_rng(2).uniform(-1, 1, size=(5, 3)))
        traces = layers.run_gru(small_gru(), xs)
        self.assertEqual(len(traces), 5)
        for prev, nxt in zip(traces, traces[1:]):
            np.testing.assert_array_equal(prev.h, nxt.h_prev)

    def test_gru_backward_matches_finite_differences(self):
        """BPTT gradients of a linear read-out of all states agree with central differences."""
        p = small_gru(seed=11)
        rng = make_rng(5)
        xs = list(rng.uniform(-1, 1, size=(4, 3)))
        readouts = list(rng.uniform(-1, 1, size=(4, 4)))

        def objective(params, inputs):
            traces = layers.run_gru(params, inputs)
            return sum(float(w @ t.h) for w, t in zip(readouts, traces))

        grads, dxs = layers.gru_backward(layers.run_gru(p, xs), p, readouts)
        eps = 1e-6
        for name, analytic in grads.tensors().items():
            for index in [(0, 0), (1, 2), (3, 1)]:
                plus, minus = p.tensors(), p.tensors()
                plus[name] = plus[name].copy()
                minus[name] = minus[name].copy()
                plus[name][index] += eps
                minus[name][index] -= eps
                numeric = (objective(GruParams(**plus), xs) - objective(GruParams(**minus), xs)) / (2 * eps)
                self.assertAlmostEqual(analytic[index], numeric, places=6, msg=f"{name}{index}")
        for t in range(len(xs)):
            shifted_plus = [x.copy() for x in xs]
            shifted_minus = [x.copy() for x in xs]
            shifted_plus[t][1] += eps
            shifted_minus[t][1] -= eps
            numeric = (objective(p, shifted_plus) - objective(p, shifted_minus)) / (2 * eps)
            self.assertAlmostEqual(dxs[t][1], numeric, places=6)

    def test_gru_backward_is_linear_in_upstream(self):
        """Doubling the upstream gradient doubles every parameter gradient."""
        p = small_gru(seed=6)
        rng = make_rng(8)
        traces = layers.run_gru(p, list(rng.uniform(-1, 1, size=(3, 3))))
        upstream = list(rng.uniform(-1, 1, size=(3, 4)))
        single, _ = layers.gru_backward(traces, p, upstream)
        double, _ = layers.gru_backward(traces, p, [2.0 * g for g in upstream])
        for name, value in single.tensors().items():
            np.testing.assert_allclose(double.tensors()[name], 2.0 * value, rtol=1e-12, atol=1e-15)

    def test_gru_backward_none_means_zero(self):
        """No upstream gradient at any step gives all-zero gradients."""
        p = small_gru()
        traces = layers.run_gru(p, list(make_rng(1).uniform(-1, 1, size=(3, 3))))
        grads, dxs = layers.gru_backward(traces, p, [None, None, None])
        for value in grads.tensors().values():
            self.assertFalse(np.any(value))
        self.assertFalse(np.any(np.concatenate(dxs)))


class TestHeads(unittest.TestCase):
    """Tests for embedding lookup and the visual and textual heads."""

    def test_embed_returns_column_copy(self):
        """The embedding of token t is column t, and mutating it leaves We intact."""
        We = np.arange(12.0).reshape(3, 4)  # pylint: disable=invalid-name
        x = layers.embed(We, 2)
        np.testing.assert_array_equal(x, [2.0, 6.0, 10.0])
        x[0] = 100.0
        self.assertEqual(We[0, 2], 2.0)

    def test_embed_out_of_range(self):
        """Token ids beyond the vocabulary raise VocabularyError."""
        with self.assertRaises(VocabularyError):
            layers.embed(np.zeros((3, 4)), 4)

    def test_textual_head_is_distribution(self):
        """Softmax outputs are positive and sum to one, even for large logits."""
        L = np.array([[1000.0, 0.0], [0.0, 1000.0], [0.0, 0.0]])  # pylint: disable=invalid-name
        probs = layers.textual_head(L, np.array([1.0, 0.5]))
        self.assertAlmostEqual(float(probs.sum()), 1.0)
        self.assertTrue(np.all(np.isfinite(probs)))

    def test_visual_head_clips(self):
        """The visual head applies the clipped rectifier to V h."""
        V = np.array([[1.0, 0.0], [0.0, -1.0], [10.0, 0.0]])  # pylint: disable=invalid-name
        np.testing.assert_array_equal(layers.visual_head(V, np.array([1.0, 1.0])), [1.0, 0.0, 5.0])

    def test_textual_head_sums_to_one_for_moderate_logits(self):
        """For logits of magnitude at most 30 the distribution sums to 1 within 1e-9."""
        rng = make_rng(22)
        for _ in range(50):
            L = rng.uniform(-30.0, 30.0, size=(40, 1))  # pylint: disable=invalid-name
            probs = layers.textual_head(L, np.array([1.0]))
            self.assertLess(abs(float(probs.sum()) - 1.0), 1e-9)
            self.assertTrue(np.all(probs > 0))

    def test_textual_head_backward(self):
        """Gradient of -w log p[target] wrt the logits is w (p - onehot)."""
        L = make_rng(3).uniform(-1, 1, size=(5, 2))  # pylint: disable=invalid-name
        h = np.array([0.3, -0.7])
        probs = layers.textual_head(L, h)
        dL, dh = layers.textual_head_backward(L, h, probs, 2, 0.5)  # pylint: disable=invalid-name
        expected_logits = 0.5 * (probs - np.eye(5)[2])
        np.testing.assert_allclose(dL, np.outer(expected_logits, h))
        np.testing.assert_allclose(dh, L.T @ expected_logits)


if __name__ == "__main__":
    unittest.main()
