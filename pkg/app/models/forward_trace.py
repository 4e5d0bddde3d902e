"""
Data model for everything one forward pass produces.
"""

from dataclasses import dataclass
from typing import List, Tuple

from app.imaginet.numcore import Vector
from app.models.gru_step_trace import GruStepTrace


@dataclass(frozen=True)
class ForwardTrace:
    """
    Result of running a sentence through both pathways.

    Attributes:
        tokens: The sentence the trace was computed for.
        visual_traces: Per-step traces of the visual GRU.
        textual_traces: Per-step traces of the textual GRU.
        predicted_image: Projection of the final visual state.
        next_word_dists: One distribution per position, predicting the following token.
    """

    tokens: Tuple[int, ...]
    visual_traces: List[GruStepTrace]
    textual_traces: List[GruStepTrace]
    predicted_image: Vector
    next_word_dists: List[Vector]

    @property
    def sentence_len(self) -> int:
        return len(self.tokens)
