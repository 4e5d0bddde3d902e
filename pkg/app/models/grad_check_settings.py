"""
Data model for the gradient check subcommand.
"""

from dataclasses import dataclass
from typing import Optional

from app.config import GRADCHECK, GRADCHECK_MAX_DIM
from app.errors import ConfigError
from app.models.imaginet_params import TENSOR_NAMES


@dataclass(frozen=True)
class GradCheckSettings:
    """
    Problem size and tolerances of a finite-difference gradient check.

    Attributes:
        vocab_size (int): Vocabulary size of the random model.
        sentence_len (int): Tokens per sentence, END included.
        instances (int): Number of random (model, sentence, target) instances.
        epsilon (float): Central-difference step.
        tolerance (float): Largest acceptable relative error.
        coords_per_tensor (int): Coordinates sampled from each tensor.
        init_scale (float): Uniform initialisation range of the random models.
        corrupt (Optional[str]): Tensor whose analytic gradient is doubled, for
            exercising the failure path.
    """

    vocab_size: int = GRADCHECK["VOCAB_SIZE"]
    sentence_len: int = GRADCHECK["SENTENCE_LEN"]
    instances: int = GRADCHECK["INSTANCES"]
    epsilon: float = GRADCHECK["EPSILON"]
    tolerance: float = GRADCHECK["TOLERANCE"]
    coords_per_tensor: int = GRADCHECK["COORDS_PER_TENSOR"]
    init_scale: float = GRADCHECK["INIT_SCALE"]
    corrupt: Optional[str] = None

    def __post_init__(self):
        if not 2 <= self.vocab_size <= GRADCHECK_MAX_DIM:
            raise ConfigError(
                f"gradcheck vocab_size must lie in [2, {GRADCHECK_MAX_DIM}], got {self.vocab_size}"
            )
        if self.sentence_len < 1 or self.instances < 1 or self.coords_per_tensor < 1:
            raise ConfigError("sentence_len, instances and coords_per_tensor must be positive")
        if self.tolerance <= 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.corrupt is not None and self.corrupt not in TENSOR_NAMES:
            raise ConfigError(f"unknown tensor '{self.corrupt}' to corrupt")
