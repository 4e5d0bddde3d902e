"""
Data model for the synthetic grounded-language generator settings.
"""

from dataclasses import dataclass

from app.errors import ConfigError


@dataclass(frozen=True)
class SynthConfig:
    """
    Settings of the synthetic scene/caption generator.

    Attributes:
        n_objects (int): Number of object nouns.
        n_attributes (int): Number of attribute adjectives.
        n_scenes (int): Number of distinct images.
        K (int): Feature vector dimension.
        noise_sigma (float): Standard deviation of Gaussian feature noise.
        order_signal_strength (float): Weight of the background object in the features.
        seed (int): Generator seed.
        captions_per_scene (int): Paraphrases emitted per scene.
        validation_fraction (float): Share of scenes held out for validation.
        min_count (int): Vocabulary frequency threshold.
    """

    n_objects: int = 20
    n_attributes: int = 12
    n_scenes: int = 500
    K: int = 16  # pylint: disable=invalid-name
    noise_sigma: float = 0.1
    order_signal_strength: float = 0.3
    seed: int = 1
    captions_per_scene: int = 5
    validation_fraction: float = 0.2
    min_count: int = 5

    def __post_init__(self):
        for name in ("n_objects", "n_attributes", "n_scenes"):
            if getattr(self, name) < 2:
                raise ConfigError(f"{name} must be at least 2, got {getattr(self, name)}")
        if self.K < 1:
            raise ConfigError(f"K must be at least 1, got {self.K}")
        if self.noise_sigma < 0:
            raise ConfigError(f"noise_sigma must be non-negative, got {self.noise_sigma}")
        if not 0.0 <= self.order_signal_strength <= 1.0:
            raise ConfigError(
                f"order_signal_strength must lie in [0, 1], got {self.order_signal_strength}"
            )
        if self.captions_per_scene < 1:
            raise ConfigError("captions_per_scene must be at least 1")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigError("validation_fraction must lie strictly between 0 and 1")
        if self.min_count < 1:
            raise ConfigError("min_count must be at least 1")
