"""Numerical laboratory for Blaschke products, model spaces, and
weighted Bergman norms on the unit disk."""

from .geometry import EuclideanDisk, StolzDomain, pseudo_disk, rho, stolz_contains
from .sequences import (
    ConvergenceVerdict,
    ZeroSequence,
    beta_sum,
    blaschke_sum,
    gen_geometric,
    gen_power,
    gen_stolz,
    load_sequence,
    save_sequence,
    separation_constant,
    uniform_separation_constant,
)
from .blaschke import (
    TruncatedBlaschke,
    factor_deriv,
    factor_eval,
    product_deriv,
    product_eval,
    subproduct_eval,
)
from .modelspace import (
    ModelFunction,
    g_basis,
    gram_matrix,
    h2_inner,
    h_basis,
    kernel_bound,
    kernel_eval,
    synth,
    synth_deriv,
)
from .quadrature import (
    GrowthVerdict,
    QuadratureResult,
    ahern_integral,
    area_norm,
    circle_mean,
    classify_growth,
    lemma_integral,
    lemma_regime,
    richardson,
)
from .theorems import (
    ScopeVerdict,
    VerificationReport,
    VerifyConfig,
    region_classify,
    required_beta,
    theorem_scope,
    verify,
)

__version__ = "0.1.0"
