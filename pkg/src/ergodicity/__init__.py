from .bounds import ergodic_error_bound, uniform_ergodic_plan
from .coefficient import CoefficientBounds, coefficient_bounds, delta_coefficient, ergodicity_beta
from .limit import AprioriDelta, LimitResult, RunningBound, limit_approximate
from .reachability import ErgodicityReport, check_ergodic, upper_reachability
