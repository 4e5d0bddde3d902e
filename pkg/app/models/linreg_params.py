"""
Data model for the bag-of-words linear regression baseline.
"""

from dataclasses import dataclass

import numpy as np

from app.errors import ShapeError
from app.imaginet.numcore import Matrix, Vector, check_finite


@dataclass
class LinRegParams:
    """
    Parameters of the baseline prediction A x + b.

    Attributes:
        A (Matrix): K x vocab_size weights.
        b (Vector): K intercepts.
    """

    A: Matrix  # pylint: disable=invalid-name
    b: Vector

    def __post_init__(self):
        if self.b.shape != (self.A.shape[0],):
            raise ShapeError("intercept does not match weights", self.b.shape, self.A.shape)
        check_finite("LinReg A", self.A)
        check_finite("LinReg b", self.b)

    @property
    def vocab_size(self) -> int:
        return self.A.shape[1]

    @property
    def image_dim(self) -> int:
        return self.A.shape[0]

    def word_vector(self, token: int) -> Vector:
        """Column of A for ``token``; used as the baseline's word representation."""
        return np.array(self.A[:, token])
