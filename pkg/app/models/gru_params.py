"""
Data model holding the six weight matrices of one gated recurrent pathway.
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from app.errors import ShapeError
from app.imaginet.numcore import Matrix, Rng, init_matrix

GRU_TENSOR_NAMES = ("Wz", "Uz", "Wr", "Ur", "W", "U")


@dataclass
class GruParams:
    """
    Weights of a bias-free GRU.

    Input-to-hidden maps (Wz, Wr, W) are hidden_dim x input_dim; hidden-to-hidden
    maps (Uz, Ur, U) are hidden_dim x hidden_dim.
    """

    Wz: Matrix  # pylint: disable=invalid-name
    Uz: Matrix  # pylint: disable=invalid-name
    Wr: Matrix  # pylint: disable=invalid-name
    Ur: Matrix  # pylint: disable=invalid-name
    W: Matrix  # pylint: disable=invalid-name
    U: Matrix  # pylint: disable=invalid-name

    def __post_init__(self):
        hidden, inputs = self.W.shape
        for name in ("Wz", "Wr", "W"):
            if getattr(self, name).shape != (hidden, inputs):
                raise ShapeError(
                    f"GRU {name} shape inconsistent", getattr(self, name).shape, (hidden, inputs)
                )
        for name in ("Uz", "Ur", "U"):
            if getattr(self, name).shape != (hidden, hidden):
                raise ShapeError(
                    f"GRU {name} shape inconsistent", getattr(self, name).shape, (hidden, hidden)
                )

    @property
    def hidden_dim(self) -> int:
        return self.W.shape[0]

    @property
    def input_dim(self) -> int:
        return self.W.shape[1]

    @classmethod
    def initialize(
        cls, input_dim: int, hidden_dim: int, scale: float, rng: Rng
    ) -> "GruParams":
        """Uniform initialisation in the fixed tensor order Wz, Uz, Wr, Ur, W, U."""
        shapes = {
            "Wz": (hidden_dim, input_dim),
            "Uz": (hidden_dim, hidden_dim),
            "Wr": (hidden_dim, input_dim),
            "Ur": (hidden_dim, hidden_dim),
            "W": (hidden_dim, input_dim),
            "U": (hidden_dim, hidden_dim),
        }
        return cls(
            **{
                name: init_matrix(rows, cols, scale, rng)
                for name, (rows, cols) in shapes.items()
            }
        )

    def zeros_like(self) -> "GruParams":
        return GruParams(
            **{name: np.zeros_like(getattr(self, name)) for name in GRU_TENSOR_NAMES}
        )

    def tensors(self) -> Dict[str, Matrix]:
        """Tensors keyed by name, in checkpoint order."""
        return {name: getattr(self, name) for name in GRU_TENSOR_NAMES}
