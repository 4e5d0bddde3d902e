"""
Data model for one evaluation result row.
"""

from dataclasses import dataclass
from typing import Optional

CONDITIONS = ("original", "scrambled", "n/a")


@dataclass(frozen=True)
class EvalReport:
    """
    Outcome of one evaluation protocol.

    Attributes:
        metric (str): Metric name, e.g. ``image_retrieval_acc@5``.
        condition (str): ``original``, ``scrambled`` or ``n/a``.
        value (float): Metric value.
        n_queries (int): Queries that contributed to the value.
        n_candidates (int): Size of the ranked candidate pool.
        seed (Optional[int]): Evaluation seed (scrambling), if any.
        n_skipped (int): Queries excluded for coverage or degeneracy; logged, not serialized.
    """

    metric: str
    condition: str
    value: float
    n_queries: int
    n_candidates: int
    seed: Optional[int] = None
    n_skipped: int = 0

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise ValueError(f"unknown evaluation condition '{self.condition}'")
