from dataclasses import dataclass


@dataclass(frozen=True)
class LossTerms:
    """
    Value of the composite objective for one example.

    Attributes:
        total (float): alpha * lt + (1 - alpha) * lv.
        lt (float): Mean next-word cross entropy.
        lv (float): Mean squared error of the predicted image vector.
        n_clamped (int): Target probabilities raised to the floor before the log.
    """

    total: float
    lt: float
    lv: float
    n_clamped: int = 0
