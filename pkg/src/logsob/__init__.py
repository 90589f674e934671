"""Log-Sobolev constant estimation for Gaussian-smoothed measures on the line.

Build a measure, smooth it with a Gaussian of variance delta, and the
package gives you the smoothed density/CDF machinery, the monotone
transport map from the source Gaussian with Lipschitz estimates, every
closed-form constant bound, a two-sided Hardy-criterion estimate, and
empirical entropy/energy ratio lower bounds, plus a CLI that sweeps
(measure, delta) grids into deterministic reports.
"""

from .bounds import (
    BobkovGoetzeEstimate,
    BoundReport,
    TransportRouteBound,
    bobkov_goetze,
    bound_hardy,
    bound_multidim,
    bound_pushforward,
    bound_transport,
    compute_bound_report,
    gaussian_lsi_constant,
    median,
)
from .empirical import (
    ParamFamily,
    RatioSearch,
    TestFunction,
    VerifyReport,
    bump_family,
    energy,
    entropy,
    exponential_family,
    ratio,
    ratio_lower_bound,
    shipped_families,
    step_family,
    verify_lsi,
)
from .errors import (
    BracketFailure,
    ConfigParseError,
    DomainError,
    EmptyFamily,
    InvalidDensity,
    LogsobError,
    MassNotNormalized,
    MeasureParseError,
    NonintegrableTestFunction,
    NonpositiveWeight,
    QuadratureFailure,
    SupremumNotLocalized,
    ZeroScale,
)
from .logdomain import LogValue
from .measures import (
    Measure1D,
    SupportRadius,
    TabulatedDensity,
    centered,
    integrate,
    load_measure,
    make_discrete,
    make_measure,
    make_uniform,
    measure_from_dict,
    measure_to_dict,
    pushforward_affine,
    support_radius,
)
from .smoothing import (
    GaussianParams,
    QuadratureConfig,
    SmoothedMeasure,
    gaussian_cdf,
    gaussian_density,
    gaussian_sf,
    log_gaussian_cdf,
    log_gaussian_density,
    log_gaussian_sf,
)
from .transport import (
    LipschitzEstimate,
    TransportMap,
    lipschitz_theoretical_bound,
    transport_table,
)

__all__ = [
    "BobkovGoetzeEstimate",
    "BoundReport",
    "BracketFailure",
    "ConfigParseError",
    "DomainError",
    "EmptyFamily",
    "GaussianParams",
    "InvalidDensity",
    "LipschitzEstimate",
    "LogValue",
    "LogsobError",
    "MassNotNormalized",
    "Measure1D",
    "MeasureParseError",
    "NonintegrableTestFunction",
    "NonpositiveWeight",
    "ParamFamily",
    "QuadratureConfig",
    "QuadratureFailure",
    "RatioSearch",
    "SmoothedMeasure",
    "SupportRadius",
    "SupremumNotLocalized",
    "TabulatedDensity",
    "TestFunction",
    "TransportMap",
    "TransportRouteBound",
    "VerifyReport",
    "ZeroScale",
    "bobkov_goetze",
    "bound_hardy",
    "bound_multidim",
    "bound_pushforward",
    "bound_transport",
    "bump_family",
    "centered",
    "compute_bound_report",
    "energy",
    "entropy",
    "exponential_family",
    "gaussian_cdf",
    "gaussian_density",
    "gaussian_lsi_constant",
    "gaussian_sf",
    "integrate",
    "lipschitz_theoretical_bound",
    "load_measure",
    "log_gaussian_cdf",
    "log_gaussian_density",
    "log_gaussian_sf",
    "make_discrete",
    "make_measure",
    "make_uniform",
    "measure_from_dict",
    "measure_to_dict",
    "median",
    "pushforward_affine",
    "ratio",
    "ratio_lower_bound",
    "shipped_families",
    "step_family",
    "support_radius",
    "transport_table",
    "verify_lsi",
]
