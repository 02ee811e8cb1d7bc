"""Two-sample Hotelling T^2 test and its behaviour under equicorrelation."""

from .ellipse import (IsoPowerEllipse, ShiftPair, ellipse_points, iso_power_residual,
                      principal_radii, solve_a2)
from .equicorr import (EquicorrModel, InverseCoefficients, ShiftAlternative, argmax_m,
                       increment, increment_positive_threshold, inverse_coefficients,
                       one_vs_all_gap, t_star_squared)
from .estimator import HotellingT2Test
from .exceptions import (DegenerateDimension, DimensionMismatch, EigenFailure, HotellingError,
                         InvalidInput, NotPositiveDefinite)
from .hotelling import HotellingResult, hotelling_t2, permutation_test, pooled_covariance
from .linalg import cholesky, pseudo_inverse, solve_spd
from .simulate import (SimConfig, SimSummary, expected_t2_over_k, figure3_curve, run_simulation,
                       sample_equicorr_mvn)
from .special import f_cdf, f_sf

__version__ = "0.1.0"
