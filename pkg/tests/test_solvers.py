from src.report.tables import TABLE_ORDER
from src.solvers import BaseSolver, SolverOrchestrator, Task, build_solvers


class DoublingSolver(BaseSolver):
    def __init__(self):
        super().__init__("doubling", ["X1"], None)

    def solve(self, task: Task) -> int:
        return 2 * task.m


class BrokenSolver(BaseSolver):
    def __init__(self):
        super().__init__("broken", ["X2"], None)

    def solve(self, task: Task) -> int:
        raise ValueError("no luck")


def make_orchestrator(workers=2):
    orchestrator = SolverOrchestrator(num_workers=workers)
    orchestrator.register_solver(DoublingSolver())
    orchestrator.register_solver(BrokenSolver())
    return orchestrator


def test_tasks_come_back_in_submission_order():
    orchestrator = make_orchestrator(workers=3)
    tasks = orchestrator.solve_all([("X1", {'m': m}) for m in range(1, 11)])
    assert [t.computed for t in tasks] == [2 * m for m in range(1, 11)]
    assert all(t.status == "completed" for t in tasks)


def test_failures_are_recorded_per_task():
    orchestrator = make_orchestrator()
    tasks = orchestrator.solve_all([("X1", {'m': 3}), ("X2", {'m': 4}), ("X9", {'m': 5}), ("X1", {})])
    assert [t.status for t in tasks] == ["completed", "failed", "failed", "failed"]
    assert tasks[1].error == "no luck"
    assert "no solver" in tasks[2].error
    assert "has no m" in tasks[3].error

    status = orchestrator.status()
    assert status['rows'] == 4
    assert status['completed'] == 1
    assert status['solvers']['doubling'] == {'tables': ["X1"], 'completed': 1, 'failed': 1}
    assert not status['running']


def test_solver_routing():
    orchestrator = make_orchestrator()
    assert orchestrator.solver_for("X2").name == "broken"
    assert orchestrator.solver_for("X3") is None


def test_every_table_has_a_solver(sieve):
    solvers = build_solvers(sieve).values()
    for table_id in TABLE_ORDER:
        assert sum(solver.can_handle(table_id) for solver in solvers) == 1, table_id


def test_table_solvers_compute_rows(sieve):
    orchestrator = SolverOrchestrator(num_workers=2)
    for solver in build_solvers(sieve).values():
        orchestrator.register_solver(solver)
    rows = [("T3.1", {'m': 5}), ("T3.2a", {'m': 2}), ("T3.2b", {'m': 3}), ("T3.3", {'m': 5}),
            ("T3.4", {'m': 8}), ("T4.1", {'m': 3}), ("EX4.1", {'m': 2, 'variant': 'tau_n'}),
            ("EX4.2", {'m': 2})]
    tasks = orchestrator.solve_all(rows)
    assert [t.computed for t in tasks] == [37, 9, 4, 9, 25, 13, 1, 5]
