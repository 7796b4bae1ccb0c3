"""Dense symmetric eigen-decomposition with a fixed eigenvector sign convention"""

from typing import Tuple

import numpy as np

from ..utils.errors import SymmetryError

SYMMETRY_RTOL = 1e-12


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so that each column's largest-magnitude component is positive"""
    v = np.array(vectors, dtype=float)
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def eig_sym(matrix: np.ndarray, rtol: float = SYMMETRY_RTOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
    real symmetric matrix.

    Raises:
        SymmetryError: the matrix is not square or ‖M − Mᵀ‖_max exceeds
            rtol·max(1, ‖M‖_max).
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SymmetryError(f"eig_sym needs a square matrix, got shape {m.shape}")
    if m.size == 0:
        return np.zeros(0), np.zeros((0, 0))
    scale = max(1.0, float(np.max(np.abs(m))))
    asym = float(np.max(np.abs(m - m.T)))
    if asym > rtol * scale:
        raise SymmetryError(f"matrix is not symmetric: max |M - M^T| = {asym:.3e}")
    values, vectors = np.linalg.eigh(0.5 * (m + m.T))
    return values, fix_signs(vectors)


def eigvals_sym(matrix: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues only"""
    return np.linalg.eigvalsh(np.asarray(matrix, dtype=float))
