"""One solver per family of reproduced table rows."""

from typing import Dict, List, Type

from .base_solver import BaseSolver, Task
from ..helpers.errors import PrimeRatioError
from ..numtheory.primes import PrimeSieve
from ..numtheory.search import (SearchOutcome, least_divisor_witness, least_f, least_n_ratio,
                                least_phi, least_s, least_tau)
from ..numtheory.sfunction import compute_S


def _witness(outcome: SearchOutcome) -> int:
    if outcome.witness_n is None:
        raise PrimeRatioError(f"no witness for {outcome.spec.kind.value} {outcome.spec.params} "
                              f"up to n={outcome.scanned_up_to}")
    return outcome.witness_n


class SFunctionSolver(BaseSolver):
    def __init__(self, sieve: PrimeSieve):
        super().__init__("s_function", ["T3.1"], sieve)

    def solve(self, task: Task) -> int:
        return compute_S(task.m, self.sieve).s_value


class RatioSolver(BaseSolver):
    """Least n > 1 with π(n) = (n − 1)/m (T3.2a) or π(n) = (n + m − 1)/m (T3.2b)."""

    def __init__(self, sieve: PrimeSieve):
        super().__init__("ratio", ["T3.2a", "T3.2b"], sieve)

    def solve(self, task: Task) -> int:
        m = task.m
        a = -1 if task.table_id == "T3.2a" else m - 1
        return _witness(least_n_ratio(m, a, self.sieve))


class CorollarySolver(BaseSolver):
    """s(m) with π(mn) = m + n and f(m) with π(mn) = F_m + n."""

    def __init__(self, sieve: PrimeSieve):
        super().__init__("corollary", ["T3.3", "T3.4"], sieve)

    def solve(self, task: Task) -> int:
        m = task.m
        if task.table_id == "T3.3":
            return _witness(least_s(m, self.sieve))
        return _witness(least_f(m, self.sieve))


class TotientSolver(BaseSolver):
    VARIANTS = {'T4.1': 'phi_n', 'T4.2': 'phi_sum', 'T4.3': 'phi_of_sum'}

    def __init__(self, sieve: PrimeSieve):
        super().__init__("totient", list(self.VARIANTS), sieve)

    def solve(self, task: Task) -> int:
        return _witness(least_phi(task.m, self.VARIANTS[task.table_id], self.sieve))


class DivisorSolver(BaseSolver):
    def __init__(self, sieve: PrimeSieve):
        super().__init__("divisor_count", ["EX4.1"], sieve)

    def solve(self, task: Task) -> int:
        return _witness(least_tau(task.m, task.payload['variant'], self.sieve))


class PrimeSumSolver(BaseSolver):
    def __init__(self, sieve: PrimeSieve):
        super().__init__("prime_sum", ["EX4.2"], sieve)

    def solve(self, task: Task) -> int:
        variant = task.payload.get('variant', 'divides_pm_pn')
        return _witness(least_divisor_witness(task.m, self.sieve, variant))


SOLVER_TYPES: List[Type[BaseSolver]] = [
    SFunctionSolver, RatioSolver, CorollarySolver, TotientSolver, DivisorSolver, PrimeSumSolver,
]


def build_solvers(sieve: PrimeSieve) -> Dict[str, BaseSolver]:
    solvers = [solver_type(sieve) for solver_type in SOLVER_TYPES]
    return {solver.name: solver for solver in solvers}
