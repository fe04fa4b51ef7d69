from .base_solver import BaseSolver, Task
from .orchestrator import SolverOrchestrator
from .table_solvers import build_solvers

__all__ = ["BaseSolver", "Task", "SolverOrchestrator", "build_solvers"]
