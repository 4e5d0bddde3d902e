"""
Data model for the complete learnable parameter set of the two-pathway model.
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from app.errors import ShapeError
from app.imaginet.numcore import Matrix
from app.models.gru_params import GRU_TENSOR_NAMES, GruParams

PATHWAYS = ("gru_visual", "gru_textual")

# Checkpoint order: We, gru_visual.{Wz,Uz,Wr,Ur,W,U}, gru_textual.{...}, V, L
TENSOR_NAMES = (
    ("We",)
    + tuple(f"{pathway}.{name}" for pathway in PATHWAYS for name in GRU_TENSOR_NAMES)
    + ("V", "L")
)


@dataclass
class ImaginetParams:
    """
    Every learnable tensor of the model; nothing trainable lives elsewhere.

    Attributes:
        We (Matrix): Word embeddings, embedding_dim x vocab_size.
        gru_visual (GruParams): Visual pathway recurrence.
        gru_textual (GruParams): Textual pathway recurrence.
        V (Matrix): Visual projection, K x hidden_dim.
        L (Matrix): Softmax weights, vocab_size x hidden_dim.
    """

    We: Matrix  # pylint: disable=invalid-name
    gru_visual: GruParams
    gru_textual: GruParams
    V: Matrix  # pylint: disable=invalid-name
    L: Matrix  # pylint: disable=invalid-name

    def __post_init__(self):
        for pathway in PATHWAYS:
            gru = getattr(self, pathway)
            if gru.input_dim != self.embedding_dim:
                raise ShapeError(
                    f"{pathway} input does not match embeddings",
                    gru.W.shape,
                    self.We.shape,
                )
        if self.gru_visual.hidden_dim != self.gru_textual.hidden_dim:
            raise ShapeError(
                "pathway hidden sizes differ",
                self.gru_visual.W.shape,
                self.gru_textual.W.shape,
            )
        if self.V.shape[1] != self.hidden_dim:
            raise ShapeError("V does not match hidden size", self.V.shape, self.hidden_dim)
        if self.L.shape != (self.vocab_size, self.hidden_dim):
            raise ShapeError(
                "L does not match vocabulary and hidden size",
                self.L.shape,
                (self.vocab_size, self.hidden_dim),
            )

    @property
    def vocab_size(self) -> int:
        return self.We.shape[1]

    @property
    def embedding_dim(self) -> int:
        return self.We.shape[0]

    @property
    def hidden_dim(self) -> int:
        return self.gru_visual.hidden_dim

    @property
    def image_dim(self) -> int:
        return self.V.shape[0]

    def zeros_like(self) -> "ImaginetParams":
        return ImaginetParams.from_tensors(
            {name: np.zeros_like(value) for name, value in self.tensors().items()}
        )

    def tensors(self) -> Dict[str, Matrix]:
        """All tensors keyed by dotted name, in checkpoint order."""
        named = {"We": self.We}
        for pathway in PATHWAYS:
            for name, value in getattr(self, pathway).tensors().items():
                named[f"{pathway}.{name}"] = value
        named["V"] = self.V
        named["L"] = self.L
        return named

    @classmethod
    def from_tensors(cls, named: Dict[str, Matrix]) -> "ImaginetParams":
        """Inverse of ``tensors``."""
        missing = [name for name in TENSOR_NAMES if name not in named]
        if missing:
            raise ShapeError(f"missing parameter tensors {missing}")
        return cls(
            We=named["We"],
            gru_visual=GruParams(
                **{name: named[f"gru_visual.{name}"] for name in GRU_TENSOR_NAMES}
            ),
            gru_textual=GruParams(
                **{name: named[f"gru_textual.{name}"] for name in GRU_TENSOR_NAMES}
            ),
            V=named["V"],
            L=named["L"],
        )
