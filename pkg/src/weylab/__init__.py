"""weylab: desk-scale numerical laboratory for quadratic Weyl sums.

Modules: expsum (sum evaluation), gauss (Gauss sums), circle (major arcs),
moments (L^alpha norms and exponents), arith (totient/zeta/Bernoulli),
lpcordoba (Littlewood-Paley and Bernstein machinery), cli (front end).
"""

from .arith import (
    TotientSumEstimate,
    faulhaber_sum,
    mobius_sieve,
    totient_sieve,
    totient_sum_compare,
    zeta,
    zeta_constants,
)
from .circle import (
    FareyFraction,
    MajorArc,
    arc_center_sum_check,
    arc_sup_inf_scan,
    check_disjoint,
    enumerate_major_arcs,
    fresnel_integral,
)
from .errors import (
    AliasingError,
    InvariantViolation,
    ResolutionError,
    WeylabError,
    WorkBudgetError,
)
from .expsum import (
    GridSpec,
    TorusPoint,
    TrigPoly,
    trigpoly_eval_grid,
    weyl_sum,
    weyl_sum_grid,
)
from .gauss import (
    GaussSumParams,
    admissible_b,
    gauss_magnitude_closed_form,
    gauss_sum_direct,
)
from .lpcordoba import (
    DyadicBlocks,
    bernstein_check,
    cordoba_ratio,
    dyadic_split,
    quadratic_block_split,
    square_function_norm,
)
from .moments import (
    FitResult,
    NormSample,
    fit_exponent,
    level_set_fraction,
    marginal_sup_scan,
    moment_exact_even,
    moment_quadrature,
    rudin_ratio,
)

__all__ = [
    "AliasingError",
    "DyadicBlocks",
    "FareyFraction",
    "FitResult",
    "GaussSumParams",
    "GridSpec",
    "InvariantViolation",
    "MajorArc",
    "NormSample",
    "ResolutionError",
    "TorusPoint",
    "TotientSumEstimate",
    "TrigPoly",
    "WeylabError",
    "WorkBudgetError",
    "admissible_b",
    "arc_center_sum_check",
    "arc_sup_inf_scan",
    "bernstein_check",
    "check_disjoint",
    "cordoba_ratio",
    "dyadic_split",
    "enumerate_major_arcs",
    "faulhaber_sum",
    "fit_exponent",
    "fresnel_integral",
    "gauss_magnitude_closed_form",
    "gauss_sum_direct",
    "level_set_fraction",
    "marginal_sup_scan",
    "mobius_sieve",
    "moment_exact_even",
    "moment_quadrature",
    "quadratic_block_split",
    "rudin_ratio",
    "square_function_norm",
    "totient_sieve",
    "totient_sum_compare",
    "trigpoly_eval_grid",
    "weyl_sum",
    "weyl_sum_grid",
    "zeta",
    "zeta_constants",
]

__version__ = "0.1.0"
