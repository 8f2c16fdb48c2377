"""Daily energy simulation for an electric railway station.

Combines a peak-minimizing receding-horizon EV charging policy with a
cost-minimizing station dispatch (grid exchange, battery storage,
recovered braking energy, solar) over synthetic or user-supplied daily
scenarios.
"""

__version__ = "0.1.0"

from .solver import (  # noqa: F401
    LinearModel,
    LpSolution,
    LpStatus,
    MilpSolution,
    MilpStatus,
    ModelError,
    SolverNumericalError,
    solve_lp,
    solve_milp,
)
