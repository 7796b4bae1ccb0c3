"""Perturbative tunneling shifts, degenerate splitting and first-order corrections"""

from .curves import CurveShift, com_distance, com_offdiag, curve_shift
from .degenerate import DegenerateSplitting, asymptotic_splitting, degenerate_splitting
from .eigvec import EigvecCorrection, eigvec_first_order, wavefunction_correction
from .shift import (SplittingReport, ensure_nondegenerate, family_shift_closed_form,
                    family_shift_log, perturbative_shift)

__all__ = [
    "CurveShift", "com_distance", "com_offdiag", "curve_shift",
    "DegenerateSplitting", "asymptotic_splitting", "degenerate_splitting",
    "EigvecCorrection", "eigvec_first_order", "wavefunction_correction",
    "SplittingReport", "ensure_nondegenerate", "family_shift_closed_form",
    "family_shift_log", "perturbative_shift",
]
