"""
Data model for the composite objective settings.
"""

from dataclasses import dataclass

from app.errors import ConfigError
from app.models.model_variant import ModelVariant


@dataclass(frozen=True)
class LossConfig:
    """
    Settings of the composite loss alpha * textual + (1 - alpha) * visual.

    Attributes:
        alpha (float): Weight of the textual term, in [0, 1].
        K (int): Dimension of the image feature vector.
    """

    alpha: float
    K: int  # pylint: disable=invalid-name

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.K < 1:
            raise ConfigError(f"K must be at least 1, got {self.K}")

    @classmethod
    def for_variant(cls, variant: ModelVariant, K: int) -> "LossConfig":  # pylint: disable=invalid-name
        return cls(alpha=variant.alpha, K=K)
