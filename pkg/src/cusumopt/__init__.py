"""Economic-statistical design of CUSUM control charts with NSGA-II."""

__version__ = "0.1.0"

from .economics import (  # noqa: E402
    LITERAL,
    NO_IN_CONTROL_COST,
    CostModelVariant,
    CostTimeParams,
    ProcessModel,
    expected_cost_per_cycle,
)
from .moea import MoeaConfig, ParetoFront, evolve  # noqa: E402
from .problem import ArlConstraints, ChartDesignProblem, DesignSpace, Evaluation  # noqa: E402
from .run_length import ChartDesign, RunLengthProfile, arl_profile  # noqa: E402

__all__ = [
    "LITERAL",
    "NO_IN_CONTROL_COST",
    "ArlConstraints",
    "ChartDesign",
    "ChartDesignProblem",
    "CostModelVariant",
    "CostTimeParams",
    "DesignSpace",
    "Evaluation",
    "MoeaConfig",
    "ParetoFront",
    "ProcessModel",
    "RunLengthProfile",
    "arl_profile",
    "evolve",
    "expected_cost_per_cycle",
]
