from dataclasses import dataclass


@dataclass(frozen=True)
class EpochLoss:
    """
    Mean training losses over one epoch.

    Attributes:
        epoch (int): 1-based epoch number.
        lt (float): Mean textual loss.
        lv (float): Mean visual loss.
        total (float): Mean composite loss.
        n_clamped (int): Probability clamp events during the epoch.
    """

    epoch: int
    lt: float
    lv: float
    total: float
    n_clamped: int = 0
