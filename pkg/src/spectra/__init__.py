"""Spectral solver: eigensolver, bound states, branch flows, wavefunctions"""

from .eigen import eig_sym, eigvals_sym, fix_signs
from .flow import EigenFlow, branch_flow, flow_grid
from .riesz import contour_residue, riesz_projection_check
from .solver import (BoundState, bound_state_at, branch_value, find_bound_states,
                     search_window, window_top)
from .wavefunction import curve_wavefunction, free_kernel, wavefunction

__all__ = [
    "eig_sym", "eigvals_sym", "fix_signs",
    "EigenFlow", "branch_flow", "flow_grid",
    "contour_residue", "riesz_projection_check",
    "BoundState", "bound_state_at", "branch_value", "find_bound_states",
    "search_window", "window_top",
    "curve_wavefunction", "free_kernel", "wavefunction",
]
