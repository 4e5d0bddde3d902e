"""
Data model for the optimizer state.
"""

from dataclasses import dataclass, field
from typing import Dict

from app.config import ADAM_BETA1, ADAM_BETA2, ADAM_EPS
from app.imaginet.numcore import Matrix


@dataclass
class AdamState:
    """
    First and second moment estimates for every parameter tensor.

    Attributes:
        lr (float): Step size.
        beta1 (float): Decay of the first moment.
        beta2 (float): Decay of the second moment.
        eps (float): Denominator floor.
        step_count (int): Number of updates applied so far.
        m (Dict[str, Matrix]): First moments keyed by tensor name, zero until first use.
        v (Dict[str, Matrix]): Second moments keyed by tensor name, zero until first use.
    """

    lr: float
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    eps: float = ADAM_EPS
    step_count: int = 0
    m: Dict[str, Matrix] = field(default_factory=dict)
    v: Dict[str, Matrix] = field(default_factory=dict)
