"""
Data model for the activation functions used by the recurrent pathways and the visual head.
"""

from dataclasses import dataclass

from app.config import CLIP_HI, CLIP_LO, GATE_SLOPE
from app.errors import ConfigError


@dataclass(frozen=True)
class ActivationConfig:
    """
    Parameters of the steep gate sigmoid and the clipped rectifier.

    Attributes:
        gate_slope (float): Slope multiplier inside the gate sigmoid.
        clip_lo (float): Lower clip bound of the rectifier.
        clip_hi (float): Upper clip bound of the rectifier.
    """

    gate_slope: float = GATE_SLOPE
    clip_lo: float = CLIP_LO
    clip_hi: float = CLIP_HI

    def __post_init__(self):
        if not self.clip_lo < self.clip_hi:
            raise ConfigError(
                f"clip_lo ({self.clip_lo}) must be below clip_hi ({self.clip_hi})"
            )
        if self.gate_slope <= 0:
            raise ConfigError(f"gate_slope must be positive, got {self.gate_slope}")


DEFAULT_ACTIVATION = ActivationConfig()
