"""
Unit tests for the minibatch training loops.
"""

import unittest

import numpy as np

from app.data.synthetic import gen_synthetic
from app.errors import DataError, NumericalError
from app.imaginet import network, trainer
from app.imaginet.numcore import make_rng
from app.imaginet.optim import adam_step
from app.models.adam_state import AdamState
from app.models.imaginet_params import ImaginetParams
from app.models.linreg_params import LinRegParams
from app.models.loss_config import LossConfig
from app.models.model_variant import ModelVariant
from app.models.run_config import RunConfig
from app.models.synth_config import SynthConfig

CORPUS = gen_synthetic(SynthConfig(n_objects=5, n_attributes=3, n_scenes=20, K=6, min_count=1, seed=2))


def run_config(**overrides):
    values = dict(embedding_dim=6, hidden_dim=6, K=6, epochs=4, batch_size=8, lr=0.01, seed=1)
    values.update(overrides)
    return RunConfig(**values)


def fresh_params(seed=0):
    return network.init_params(len(CORPUS.vocabulary), 6, 6, 6, 0.1, make_rng(seed))


class TestTrain(unittest.TestCase):
    """Tests for trainer.train and trainer.batch_gradients."""

    def test_loss_decreases(self):
        """The mean epoch loss falls over a few epochs."""
        _, history = trainer.train(fresh_params(), CORPUS.train, run_config(), make_rng(1))
        self.assertEqual([row.epoch for row in history], [1, 2, 3, 4])
        self.assertLess(history[-1].total, history[0].total)

    def test_fixed_batch_loss_halves_for_every_variant(self):
        """200 Adam steps on one 50-caption batch at least halve the mean loss of each variant."""
        batch = CORPUS.train[:50]
        self.assertEqual(len(batch), 50)
        for variant in (ModelVariant.VISUAL, ModelVariant.TEXTUAL, ModelVariant.MULTITASK):
            cfg = LossConfig(variant.alpha, 6)
            tensors = network.init_params(len(CORPUS.vocabulary), 8, 8, 6, 0.1, make_rng(4)).tensors()
            state = AdamState(lr=0.01)
            losses = []
            for _ in range(200):
                grads, terms = trainer.batch_gradients(ImaginetParams.from_tensors(tensors), batch, cfg)
                losses.append(np.mean([t.total for t in terms]))
                tensors, state = adam_step(state, tensors, grads)
            _, terms = trainer.batch_gradients(ImaginetParams.from_tensors(tensors), batch, cfg)
            final = np.mean([t.total for t in terms])
            self.assertLessEqual(final, 0.5 * losses[0], variant.name)

    def test_deterministic(self):
        """Equal seeds give bit-identical parameters and loss curves."""
        a, history_a = trainer.train(fresh_params(), CORPUS.train, run_config(epochs=2), make_rng(5))
        b, history_b = trainer.train(fresh_params(), CORPUS.train, run_config(epochs=2), make_rng(5))
        self.assertEqual(history_a, history_b)
        for name, tensor in a.tensors().items():
            np.testing.assert_array_equal(b.tensors()[name], tensor)

    def test_textual_variant_leaves_visual_weights_alone(self):
        """With alpha = 1 the image projection and visual GRU never move."""
        params = fresh_params()
        trained, _ = trainer.train(
            params, CORPUS.train, run_config(variant="textual", epochs=1), make_rng(1)
        )
        np.testing.assert_array_equal(trained.V, params.V)
        for name, tensor in params.gru_visual.tensors().items():
            np.testing.assert_array_equal(trained.gru_visual.tensors()[name], tensor)
        self.assertFalse(np.array_equal(trained.L, params.L))

    def test_on_epoch_callback(self):
        """The callback sees every epoch number with the current parameters."""
        seen = []
        trainer.train(
            fresh_params(),
            CORPUS.train,
            run_config(epochs=3),
            make_rng(1),
            on_epoch=lambda epoch, p: seen.append((epoch, p.vocab_size)),
        )
        self.assertEqual(seen, [(1, len(CORPUS.vocabulary)), (2, len(CORPUS.vocabulary)), (3, len(CORPUS.vocabulary))])

    def test_empty_training_set(self):
        """Training without records is a data error."""
        with self.assertRaises(DataError):
            trainer.train(fresh_params(), [], run_config(), make_rng(1))

    def test_batch_gradient_is_mean_of_examples(self):
        """The batch gradient averages the per-example gradients."""
        params = fresh_params(3)
        cfg = LossConfig(0.1, 6)
        batch = CORPUS.train[:3]
        grads, terms = trainer.batch_gradients(params, batch, cfg)
        self.assertEqual(len(terms), 3)
        expected = sum(
            network.backward(params, network.forward(params, r.tokens), r.tokens, r.target, cfg).We
            for r in batch
        ) / 3
        np.testing.assert_allclose(grads["We"], expected, atol=1e-15)

    def test_non_finite_loss(self):
        """A NaN weight surfaces as a numerical error."""
        params = fresh_params()
        params.V[:] = np.nan
        with self.assertRaises(NumericalError):
            trainer.batch_gradients(params, CORPUS.train[:2], LossConfig(0.1, 6))


class TestTrainLinreg(unittest.TestCase):
    """Tests for trainer.train_linreg."""

    def test_fixed_lambda_shapes(self):
        """A configured penalty fits A (K x V) and b (K)."""
        params = trainer.train_linreg(
            CORPUS.train, CORPUS.vocabulary, run_config(variant="linreg", ridge_lambda=0.5)
        )
        self.assertIsInstance(params, LinRegParams)
        self.assertEqual(params.A.shape, (6, len(CORPUS.vocabulary)))
        self.assertEqual(params.b.shape, (6,))

    def test_deterministic_and_order_free(self):
        """The closed form does not depend on record order."""
        cfg = run_config(variant="linreg", ridge_lambda=1.0)
        a = trainer.train_linreg(CORPUS.train, CORPUS.vocabulary, cfg)
        b = trainer.train_linreg(list(reversed(CORPUS.train)), CORPUS.vocabulary, cfg)
        np.testing.assert_allclose(a.A, b.A, atol=1e-10)
        np.testing.assert_allclose(a.b, b.b, atol=1e-10)

    def test_validation_selects_lambda(self):
        """Without a configured penalty the grid is searched on the validation split."""
        params = trainer.train_linreg(
            CORPUS.train, CORPUS.vocabulary, run_config(variant="linreg"), CORPUS.validation
        )
        self.assertTrue(np.all(np.isfinite(params.A)))

    def test_empty(self):
        """No records, no fit."""
        with self.assertRaises(DataError):
            trainer.train_linreg([], CORPUS.vocabulary, run_config(variant="linreg"))


if __name__ == "__main__":
    unittest.main()
