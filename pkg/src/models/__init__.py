"""Model catalog: ModelSpec, family kernels and the principal matrix"""

from .families import (FamilyKernel, kernel_for, rel2d_saddle_estimate, rel2d_saddle_scaled,
                       salpeter_phi, salpeter_phi_prime)
from .principal import (PrincipalMatrix, binding_energies_of, eval_phi, eval_phi_offdiag_rel2d,
                        eval_phi_offdiag_salpeter, log_abs_offdiag, offdiag_bound, phi_derivative,
                        rel2d_offdiag_saddle, salpeter_offdiag_asymptotic, threshold)
from .spec import Family, ModelSpec

__all__ = [
    "FamilyKernel", "kernel_for", "rel2d_saddle_estimate", "rel2d_saddle_scaled", "salpeter_phi",
    "salpeter_phi_prime",
    "PrincipalMatrix", "binding_energies_of", "eval_phi", "eval_phi_offdiag_rel2d",
    "eval_phi_offdiag_salpeter", "log_abs_offdiag", "offdiag_bound", "phi_derivative",
    "rel2d_offdiag_saddle", "salpeter_offdiag_asymptotic", "threshold",
    "Family", "ModelSpec",
]
