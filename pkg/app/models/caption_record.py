"""
Data model for an encoded caption paired with its image feature vector.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.errors import DataError
from app.imaginet.numcore import Vector
from app.models.vocabulary import Vocabulary


@dataclass(frozen=True)
class CaptionRecord:
    """
    A training or evaluation example.

    Attributes:
        image_id (str): Identifier of the described image.
        tokens (Tuple[int, ...]): END-terminated token ids.
        target (Vector): Image feature vector of dimension K.
        text (str): Original caption text, kept for inspection.
    """

    image_id: str
    tokens: Tuple[int, ...]
    target: Vector
    text: str = ""

    def __post_init__(self):
        if not self.tokens:
            raise DataError(f"caption for {self.image_id} has no tokens")
        if self.tokens[-1] != Vocabulary.END_INDEX:
            raise DataError(f"caption for {self.image_id} does not end with END")
        if self.target.ndim != 1 or not np.all(np.isfinite(self.target)):
            raise DataError(f"target for {self.image_id} is not a finite vector")
