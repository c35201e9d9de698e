from .base import BudgetExhausted, SolveResult, SolverBudget, default_seed
from .exact import fits_area, solve_exact
from .greedy import greedy_layout, solve_greedy

__all__ = [
    "BudgetExhausted",
    "SolveResult",
    "SolverBudget",
    "default_seed",
    "fits_area",
    "greedy_layout",
    "solve_exact",
    "solve_greedy",
]

from .anneal import AnnealConfig, solve_anneal  # noqa: E402

__all__ += ["AnnealConfig", "solve_anneal"]
