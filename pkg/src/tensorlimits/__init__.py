"""Exact decomposition of large tensor powers and their limiting measures.

The pipeline: build a root system, compute weight multiplicities of tensor
powers exactly, decompose into irreducibles, form the induced probability
measures, and compare them against closed-form limit densities.
"""

from .convergence import (
    ConvergenceReport,
    char_fn_empirical,
    char_fn_limit_xi,
    convergence_report,
    default_t_grid,
    histogram_tv,
    report_to_csv,
    report_to_json,
    sup_char_error,
)
from .densities import (
    DensityModel,
    gue_identity_check,
    make_density_model,
    normalization_quadrature,
    p_eta,
    p_eta_extended,
    p_xi,
)
from .errors import (
    BasisMismatch,
    DegenerateSpec,
    InadmissibleN,
    NegativeMultiplicity,
    NotDominant,
    OutsideDomain,
    RankTooLarge,
    TensorLimitsError,
    TraceNotZero,
    UnsupportedType,
    WeylCapExceeded,
)
from .measures import (
    DiscreteMeasure,
    TensorSpec,
    admissible_N,
    eta_extended_measure,
    eta_measure,
    mixed_moments,
    pushforward_dominant_shifted,
    sigma_squared,
    xi_measure,
)
from .repchar import (
    IrrepDecomposition,
    MultiplicityMap,
    freudenthal_multiplicities,
    peel_off_decompose,
    racah_decompose,
    tensor_power_multiplicities,
    tensor_power_table,
    trace_identity_check,
    weyl_dim,
)
from .rootsys import (
    CartanType,
    RootSystemData,
    WeylElement,
    build_root_system,
    casimir_eigenvalue,
    inner_product,
    is_dominant,
    to_dominant,
    to_dominant_shifted,
    weyl_group_order,
)

__version__ = "0.1.0"

__all__ = [
    "BasisMismatch",
    "CartanType",
    "ConvergenceReport",
    "DegenerateSpec",
    "DensityModel",
    "DiscreteMeasure",
    "InadmissibleN",
    "IrrepDecomposition",
    "MultiplicityMap",
    "NegativeMultiplicity",
    "NotDominant",
    "OutsideDomain",
    "RankTooLarge",
    "RootSystemData",
    "TensorLimitsError",
    "TensorSpec",
    "TraceNotZero",
    "UnsupportedType",
    "WeylCapExceeded",
    "WeylElement",
    "admissible_N",
    "build_root_system",
    "casimir_eigenvalue",
    "char_fn_empirical",
    "char_fn_limit_xi",
    "convergence_report",
    "default_t_grid",
    "eta_extended_measure",
    "eta_measure",
    "freudenthal_multiplicities",
    "gue_identity_check",
    "histogram_tv",
    "inner_product",
    "is_dominant",
    "make_density_model",
    "mixed_moments",
    "normalization_quadrature",
    "p_eta",
    "p_eta_extended",
    "p_xi",
    "peel_off_decompose",
    "pushforward_dominant_shifted",
    "racah_decompose",
    "report_to_csv",
    "report_to_json",
    "sigma_squared",
    "sup_char_error",
    "tensor_power_multiplicities",
    "tensor_power_table",
    "to_dominant",
    "to_dominant_shifted",
    "trace_identity_check",
    "weyl_dim",
    "weyl_group_order",
    "xi_measure",
]
