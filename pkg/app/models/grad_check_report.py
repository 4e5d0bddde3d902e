"""
Data model for the outcome of a finite-difference gradient check.
"""

from dataclasses import dataclass, field
from typing import Dict


@dataclass
class GradCheckReport:
    """
    Maximum relative error between analytic and numeric gradients.

    Attributes:
        per_tensor (Dict[str, float]): Worst relative error for each tensor.
        n_coordinates (int): Total number of coordinates compared.
        epsilon (float): Finite-difference step.
    """

    per_tensor: Dict[str, float] = field(default_factory=dict)
    n_coordinates: int = 0
    epsilon: float = 0.0

    @property
    def max_error(self) -> float:
        return max(self.per_tensor.values(), default=0.0)

    def passed(self, tolerance: float) -> bool:
        return self.max_error < tolerance

    def merge(self, other: "GradCheckReport") -> "GradCheckReport":
        """Combine two reports, keeping the worst error per tensor."""
        merged = dict(self.per_tensor)
        for name, error in other.per_tensor.items():
            merged[name] = max(error, merged.get(name, 0.0))
        return GradCheckReport(
            per_tensor=merged,
            n_coordinates=self.n_coordinates + other.n_coordinates,
            epsilon=other.epsilon or self.epsilon,
        )
