from .gamble import (Gamble, StateSpace, as_gamble, centred_norm, gamble_norms,
                     indicator, max_norm, midpoint, variation)
from .rate_operator import STEP_SLACK, IntervalRateOperator, RateMatrix
from .transition import ApproximatingOperator
