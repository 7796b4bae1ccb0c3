from dataclasses import dataclass

from ..utils.errors import DomainError


@dataclass(frozen=True)
class Accuracy:
    """Absolute/relative tolerance pair handed to adaptive evaluators"""
    abs_tol: float = 1e-14
    rel_tol: float = 1e-13

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError(f"tolerances must be positive, got {self.abs_tol}, {self.rel_tol}")

    def threshold(self, magnitude: float) -> float:
        """Tolerance that applies to a quantity of the given size"""
        return max(self.abs_tol, self.rel_tol * abs(magnitude))


DEFAULT_ACCURACY = Accuracy()
