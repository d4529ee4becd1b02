from .coefficients import coeff_omega, coeff_Omega, coeff_xi, coeff_Xi, source_xi
from .identities import REGISTRY, IdentityReport, verify_all, verify_identity
from .recursion import ExpansionEvaluator, removable_singularity_probe
from .symfn import SymFn, constant, sym_product
from .taylor import chi, eval_P, remainder_slope, taylor_remainder

__all__ = (
    "REGISTRY",
    "ExpansionEvaluator",
    "IdentityReport",
    "SymFn",
    "chi",
    "coeff_Omega",
    "coeff_Xi",
    "coeff_omega",
    "coeff_xi",
    "constant",
    "eval_P",
    "remainder_slope",
    "removable_singularity_probe",
    "source_xi",
    "sym_product",
    "taylor_remainder",
    "verify_all",
    "verify_identity",
)
