from .coefficients import (
    MARKERS,
    b_factor,
    b_family,
    b_total,
    boundary_allows,
    boundary_coweight,
    boundary_weight,
    branching_coeff,
    skew_single,
)
from .oracle import MacdonaldOracle, SymmetricFunction, macdonald_oracle, scalar_product
from .params import QTParams
from .series import FormalSeries
from .specialization import Letter, Specialization
from .theta import kernel_series, kernel_value, theta_series, theta_value
