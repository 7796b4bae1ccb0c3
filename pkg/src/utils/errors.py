#!/usr/bin/env python3
"""
⚠️ KREIN ERROR HIERARCHY
============================================================
Every failure raised by the library derives from KreinError.
Value-type failures also derive from ValueError so plain
``except ValueError`` callers keep working.
"""

from typing import Optional, Tuple


class KreinError(Exception):
    """Base class for all library errors"""


class DomainError(KreinError, ValueError):
    """Argument outside the domain of a function (e.g. E at or above threshold)"""


class SingularityError(KreinError, ValueError):
    """Coinciding centers or evaluation exactly at a center"""


class GeometryError(KreinError, ValueError):
    """Malformed geometric input (curvature mismatch, bad normalization)"""


class SelfIntersectionError(GeometryError):
    """A curve polyline crosses itself"""

    def __init__(self, message: str, parameters: Tuple[float, float]):
        super().__init__(message)
        self.parameters = parameters


class OverlapError(GeometryError):
    """Two curves touch or a curve expansion is used outside its range"""

    def __init__(self, message: str, min_distance: float):
        super().__init__(message)
        self.min_distance = min_distance


class ModelError(KreinError, ValueError):
    """ModelSpec invariant violation; the message quotes the violated constraint"""


class DegeneracyError(KreinError, ValueError):
    """Degenerate parameters sent to a nondegenerate routine (or the reverse)"""


class ConvergenceError(KreinError, ArithmeticError):
    """A quadrature, series or root budget was exhausted"""


class SymmetryError(KreinError, ValueError):
    """Matrix handed to the symmetric eigensolver is not symmetric"""


class ContourError(KreinError, ValueError):
    """Riesz contour radius reaches a neighbouring root"""


class ExactSolutionError(KreinError, ValueError):
    """A closed-form two-center solution does not exist for the parameters"""


class SingleStateError(ExactSolutionError):
    """Only the symmetric two-center state is bound"""


class NoSecondRootError(ExactSolutionError):
    """The antisymmetric branch has no sign change"""


class UnsupportedFamilyError(KreinError, NotImplementedError):
    """Operation not available for the requested model family"""


class NoBoundStatesError(KreinError, ArithmeticError):
    """Search window contains no bound state"""


class ConfigError(KreinError, ValueError):
    """Run document failed schema or invariant validation"""

    def __init__(self, message: str, path: str = "", line: Optional[int] = None):
        self.path = path
        self.line = line
        location = path or "<document>"
        if line is not None:
            location = f"{location} (line {line})"
        super().__init__(f"{location}: {message}")
        self.reason = message
