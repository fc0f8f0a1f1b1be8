from .adaptive import adaptive_approximate
from .conjugate import upper_approximate
from .plans import ApproxTrace, UniformPlan, ceil_snapped
from .stopping import remaining_cost_stop
from .uniform import compose_steps, run_uniform_plan, uniform_approximate, uniform_plan
