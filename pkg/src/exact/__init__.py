"""Reference solutions: two-center closed forms and brute-force det roots"""

from .brute_force import brute_force_detroot, scaled_det
from .two_center import (TwoCenterExact, exact_two_center_1d, exact_two_center_3d,
                         numeric_two_center_2d)

__all__ = [
    "brute_force_detroot", "scaled_det",
    "TwoCenterExact", "exact_two_center_1d", "exact_two_center_3d", "numeric_two_center_2d",
]
