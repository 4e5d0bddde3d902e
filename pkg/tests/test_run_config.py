"""
Unit tests for RunConfig layering and validation.
"""

import unittest
from pathlib import Path

from app.config import PRESETS, RUN_DEFAULTS
from app.errors import ConfigError
from app.models.model_variant import ModelVariant
from app.models.run_config import RunConfig


class TestRunConfig(unittest.TestCase):
    """Tests for RunConfig.resolve and its derived settings."""

    def test_defaults_come_from_config_json(self):
        """Without overrides every field has its config.json value."""
        cfg = RunConfig.resolve({})
        self.assertEqual(cfg.hidden_dim, RUN_DEFAULTS["hidden_dim"])
        self.assertEqual(cfg.variant, RUN_DEFAULTS["variant"])

    def test_precedence(self):
        """Flags beat the config file, which beats the preset."""
        cfg = RunConfig.resolve(
            {"epochs": 2, "lr": None, "preset": "desk"},
            {"epochs": 5, "lr": 0.02, "hidden_dim": 12},
        )
        self.assertEqual(cfg.epochs, 2)
        self.assertEqual(cfg.lr, 0.02)
        self.assertEqual(cfg.hidden_dim, 12)
        self.assertEqual(cfg.embedding_dim, PRESETS["desk"]["embedding_dim"])

    def test_preset_from_file(self):
        """A preset named in the config file applies when no flag names one."""
        cfg = RunConfig.resolve({}, {"preset": "desk"})
        self.assertEqual(cfg.K, PRESETS["desk"]["K"])

    def test_unknown_keys_and_presets(self):
        """Settings outside RunConfig and unknown presets are rejected."""
        with self.assertRaises(ConfigError):
            RunConfig.resolve({}, {"colour": "red"})
        with self.assertRaises(ConfigError):
            RunConfig.resolve({"preset": "huge"})

    def test_paths_are_coerced(self):
        """String paths become Path objects."""
        cfg = RunConfig.resolve({"checkpoint": "out/model.ckpt"})
        self.assertEqual(cfg.checkpoint, Path("out/model.ckpt"))

    def test_invalid_values(self):
        """Out-of-range settings are configuration errors."""
        for bad in ({"variant": "audio"}, {"hidden_dim": 0}, {"lr": -1.0}, {"alpha": 1.5}, {"max_grad_norm": 0.0}):
            with self.assertRaises(ConfigError, msg=str(bad)):
                RunConfig(**bad)

    def test_effective_alpha(self):
        """Each variant has its fixed weight unless alpha is given."""
        self.assertEqual(RunConfig(variant="visual").effective_alpha, 0.0)
        self.assertEqual(RunConfig(variant="textual").effective_alpha, 1.0)
        self.assertEqual(RunConfig(variant="multitask").effective_alpha, ModelVariant.MULTITASK.alpha)
        self.assertEqual(RunConfig(variant="multitask", alpha=0.5).loss_config().alpha, 0.5)
        with self.assertRaises(ConfigError):
            _ = RunConfig(variant="linreg").effective_alpha

    def test_synth_config_follows_run(self):
        """Generator settings share seed, K and min_count with the run."""
        synth = RunConfig(K=8, seed=9, min_count=2, n_scenes=30).synth_config()
        self.assertEqual((synth.K, synth.seed, synth.min_count, synth.n_scenes), (8, 9, 2, 30))


if __name__ == "__main__":
    unittest.main()
