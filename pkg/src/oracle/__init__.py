from .binary_model import BinaryModel, analytic_limit, analytic_transient, binary_coefficient
from .linear_model import exact_limit, exact_transient
