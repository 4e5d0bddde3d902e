"""
Unit tests for the synthetic grounded-language generator.
"""

import unittest

import numpy as np

from app.data import synthetic
from app.data.tokenization import tokenize
from app.errors import ConfigError
from app.imaginet.numcore import make_rng
from app.models.synth_config import SynthConfig

SMALL = SynthConfig(n_objects=6, n_attributes=4, n_scenes=40, K=8, min_count=1, seed=3)


class TestSynthetic(unittest.TestCase):
    """Tests for gen_synthetic and its building blocks."""

    @classmethod
    def setUpClass(cls):
        cls.corpus = synthetic.gen_synthetic(SMALL)

    def test_deterministic(self):
        """Equal configurations produce identical corpora."""
        again = synthetic.gen_synthetic(SMALL)
        self.assertEqual(again.vocabulary.words, self.corpus.vocabulary.words)
        self.assertEqual(again.train_captions, self.corpus.train_captions)
        self.assertEqual(again.benchmark, self.corpus.benchmark)
        for image_id, vector in self.corpus.features.items():
            np.testing.assert_array_equal(again.features[image_id], vector)

    def test_seed_changes_corpus(self):
        """A different seed draws different scenes."""
        other = synthetic.gen_synthetic(
            SynthConfig(n_objects=6, n_attributes=4, n_scenes=40, K=8, min_count=1, seed=4)
        )
        self.assertNotEqual(other.train_captions, self.corpus.train_captions)

    def test_split_sizes(self):
        """A fifth of the scenes is held out and every scene has its captions."""
        self.assertEqual(len(self.corpus.features), 40)
        self.assertEqual(len(self.corpus.train), 32 * SMALL.captions_per_scene)
        self.assertEqual(len(self.corpus.validation), 8 * SMALL.captions_per_scene)
        train_ids = {r.image_id for r in self.corpus.train}
        validation_ids = {r.image_id for r in self.corpus.validation}
        self.assertFalse(train_ids & validation_ids)

    def test_features_are_clipped_and_f32_exact(self):
        """Feature vectors lie in [0, 5] and survive a float32 round trip."""
        for vector in self.corpus.features.values():
            self.assertEqual(vector.shape, (SMALL.K,))
            self.assertTrue(np.all((vector >= 0.0) & (vector <= 5.0)))
            np.testing.assert_array_equal(vector.astype(np.float32).astype(np.float64), vector)

    def test_captions_name_topic_first(self):
        """The label word precedes the background object in every caption."""
        for raw in self.corpus.train_captions:
            words = tokenize(raw.caption)
            label = self.corpus.labels[raw.image_id]
            self.assertLess(words.index(label), len(words) - 2)
            self.assertEqual(words[-1], ".")

    def test_vocabulary_from_training_split(self):
        """Every training word is indexed and encodes without UNK."""
        for record in self.corpus.train:
            self.assertNotIn(self.corpus.vocabulary.unk_index, record.tokens)
            self.assertEqual(record.tokens[-1], self.corpus.vocabulary.end_index)

    def test_word_order_carries_signal(self):
        """Swapping topic and background changes the clean features."""
        space = synthetic.SceneSpace(SMALL, make_rng(0))
        forward = space.clean_features(0, 1, 2)
        swapped = space.clean_features(2, 1, 0)
        self.assertFalse(np.allclose(forward, swapped))
        np.testing.assert_allclose(
            space.role_blind_features(0, 1, 2), space.role_blind_features(2, 1, 0)
        )

    def test_no_order_signal_when_strength_is_one(self):
        """With equal weights the role-aware features ignore the roles."""
        cfg = SynthConfig(n_objects=3, n_attributes=2, n_scenes=4, K=5, order_signal_strength=1.0)
        space = synthetic.SceneSpace(cfg, make_rng(0))
        np.testing.assert_allclose(space.clean_features(0, 1, 2), space.clean_features(2, 1, 0))

    def test_scenes_use_distinct_objects(self):
        """Topic and background are never the same object."""
        for topic, attribute, background in synthetic.sample_scenes(SMALL, make_rng(1)):
            self.assertNotEqual(topic, background)
            self.assertLess(attribute, SMALL.n_attributes)

    def test_benchmark_pairs(self):
        """The benchmark scores every object pair and every attribute pair."""
        expected = 6 * 5 // 2 + 4 * 3 // 2
        self.assertEqual(len(self.corpus.benchmark), expected)
        for word1, word2, score in self.corpus.benchmark:
            self.assertNotEqual(word1, word2)
            self.assertGreaterEqual(score, -1.0)
            self.assertLessEqual(score, 1.0)

    def test_word_pool_extends_with_generated_names(self):
        """Pools larger than the built-in lists get numbered names."""
        words = synthetic._word_pool(("a", "b"), 4, "object")  # pylint: disable=protected-access
        self.assertEqual(words, ["a", "b", "object2", "object3"])

    def test_invalid_config(self):
        """Degenerate settings are configuration errors."""
        with self.assertRaises(ConfigError):
            SynthConfig(n_scenes=0)
        with self.assertRaises(ConfigError):
            SynthConfig(validation_fraction=1.0)
        with self.assertRaises(ConfigError):
            SynthConfig(order_signal_strength=1.5)


if __name__ == "__main__":
    unittest.main()
