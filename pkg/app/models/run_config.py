"""
Data model for a fully resolved command-line run configuration.

Values are layered: config.json RUN defaults, then a named preset, then a
key=value config file, then command-line flags (highest precedence).
"""

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

from app.config import (
    BENCHMARK_PATH,
    CAPTIONS_PATH,
    CHECKPOINT_PATH,
    FEATURES_PATH,
    LABELS_PATH,
    LOSS_LOG_PATH,
    PRESETS,
    REPORT_PATH,
    RUN_DEFAULTS,
    SYNTH_DEFAULTS,
    VAL_CAPTIONS_PATH,
    VOCAB_PATH,
)
from app.errors import ConfigError
from app.models.loss_config import LossConfig
from app.models.model_variant import ModelVariant
from app.models.synth_config import SynthConfig

VARIANTS = ("visual", "textual", "multitask", "linreg")


@dataclass(frozen=True)
class RunConfig:  # pylint: disable=too-many-instance-attributes
    """
    Every setting a subcommand may need.

    Model and training fields mirror the CLI flags; path fields point at the
    interchange files; synth fields configure the synthetic generator.
    """

    variant: str = RUN_DEFAULTS["variant"]
    alpha: Optional[float] = RUN_DEFAULTS["alpha"]
    embedding_dim: int = RUN_DEFAULTS["embedding_dim"]
    hidden_dim: int = RUN_DEFAULTS["hidden_dim"]
    K: int = RUN_DEFAULTS["K"]  # pylint: disable=invalid-name
    epochs: int = RUN_DEFAULTS["epochs"]
    batch_size: int = RUN_DEFAULTS["batch_size"]
    lr: float = RUN_DEFAULTS["lr"]
    seed: int = RUN_DEFAULTS["seed"]
    min_count: int = RUN_DEFAULTS["min_count"]
    max_grad_norm: Optional[float] = RUN_DEFAULTS["max_grad_norm"]
    ridge_lambda: Optional[float] = RUN_DEFAULTS["ridge_lambda"]
    eval_seed: int = RUN_DEFAULTS["eval_seed"]
    workers: int = RUN_DEFAULTS["workers"]
    hold_period: bool = RUN_DEFAULTS["hold_period"]
    end_in_word_projection: bool = RUN_DEFAULTS["end_in_word_projection"]
    captions: Path = CAPTIONS_PATH
    val_captions: Path = VAL_CAPTIONS_PATH
    features: Path = FEATURES_PATH
    labels: Path = LABELS_PATH
    benchmark: Path = BENCHMARK_PATH
    checkpoint: Path = CHECKPOINT_PATH
    vocab: Path = VOCAB_PATH
    report: Path = REPORT_PATH
    loss_log: Path = LOSS_LOG_PATH
    n_objects: int = SYNTH_DEFAULTS["n_objects"]
    n_attributes: int = SYNTH_DEFAULTS["n_attributes"]
    n_scenes: int = SYNTH_DEFAULTS["n_scenes"]
    noise_sigma: float = SYNTH_DEFAULTS["noise_sigma"]
    order_signal_strength: float = SYNTH_DEFAULTS["order_signal_strength"]
    captions_per_scene: int = SYNTH_DEFAULTS["captions_per_scene"]
    validation_fraction: float = SYNTH_DEFAULTS["validation_fraction"]

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant '{self.variant}', expected one of {VARIANTS}")
        for name in ("embedding_dim", "hidden_dim", "K", "epochs", "batch_size", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}")
        if self.lr <= 0:
            raise ConfigError(f"lr must be positive, got {self.lr}")
        if self.min_count < 1:
            raise ConfigError(f"min_count must be at least 1, got {self.min_count}")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.max_grad_norm is not None and self.max_grad_norm <= 0:
            raise ConfigError("max_grad_norm must be positive when set")

    @property
    def is_linreg(self) -> bool:
        return self.variant == "linreg"

    @property
    def effective_alpha(self) -> float:
        """Variant alpha unless explicitly overridden."""
        if self.alpha is not None:
            return self.alpha
        if self.is_linreg:
            raise ConfigError("the linreg variant has no loss mixing weight")
        return ModelVariant(self.variant).alpha

    def loss_config(self) -> LossConfig:
        return LossConfig(alpha=self.effective_alpha, K=self.K)

    def synth_config(self) -> SynthConfig:
        return SynthConfig(
            n_objects=self.n_objects,
            n_attributes=self.n_attributes,
            n_scenes=self.n_scenes,
            K=self.K,
            noise_sigma=self.noise_sigma,
            order_signal_strength=self.order_signal_strength,
            seed=self.seed,
            captions_per_scene=self.captions_per_scene,
            validation_fraction=self.validation_fraction,
            min_count=self.min_count,
        )

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def resolve(
        cls,
        flags: Dict[str, Any],
        file_values: Optional[Dict[str, Any]] = None,
        preset: Optional[str] = None,
        base: Optional[Dict[str, Any]] = None,
    ) -> "RunConfig":
        """Layer preset, config file and flags over the config.json defaults.

        ``base`` holds command-specific defaults that sit between config.json
        and the preset.
        """
        file_values = dict(file_values or {})
        preset = flags.get("preset") or preset or file_values.pop("preset", None)
        file_values.pop("preset", None)
        values: Dict[str, Any] = dict(base or {})
        if preset is not None:
            if preset not in PRESETS:
                raise ConfigError(f"unknown preset '{preset}', expected one of {sorted(PRESETS)}")
            values.update(PRESETS[preset])
        values.update(file_values)
        values.update({k: v for k, v in flags.items() if k != "preset" and v is not None})
        unknown = sorted(set(values) - set(cls.field_names()))
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        path_fields = {f.name for f in fields(cls) if f.type is Path}
        for name in path_fields & set(values):
            values[name] = Path(values[name])
        return cls(**values)
