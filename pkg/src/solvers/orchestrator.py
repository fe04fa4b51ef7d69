import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

from .base_solver import BaseSolver, Task

Row = Tuple[str, Dict[str, Any]]


class SolverOrchestrator:
    """Routes table rows to solvers and runs them on a bounded worker pool."""

    def __init__(self, num_workers: int = 1):
        self.solvers: Dict[str, BaseSolver] = {}
        self.num_workers = max(1, num_workers)
        self.queue: Optional[asyncio.Queue] = None
        self.finished: List[Task] = []
        self.logger = logging.getLogger("orchestrator")
        self._running = False
        self._workers: List[asyncio.Task] = []
        self._executor: Optional[ThreadPoolExecutor] = None

    def register_solver(self, solver: BaseSolver):
        self.solvers[solver.name] = solver
        self.logger.debug(f"Registered solver {solver.name} for {', '.join(solver.table_ids)}")

    def solver_for(self, table_id: str) -> Optional[BaseSolver]:
        return next((s for s in self.solvers.values() if s.can_handle(table_id)), None)

    async def submit(self, table_id: str, payload: Dict[str, Any]) -> Task:
        """Queue a row; a row no solver handles comes back failed without being queued."""
        solver = self.solver_for(table_id)
        if solver is None:
            task = Task(table_id, payload, status="failed", error=f"no solver for table {table_id}")
            self.logger.error(task.error)
            self.finished.append(task)
            return task
        task = solver.accept(table_id, payload)
        await self.queue.put((solver, task))
        return task

    async def _start(self):
        self._running = True
        self._executor = ThreadPoolExecutor(max_workers=self.num_workers, thread_name_prefix="solver")
        self._workers = [asyncio.create_task(self._worker(i)) for i in range(self.num_workers)]
        self.logger.info(f"Started {self.num_workers} solver workers")

    async def _worker(self, worker_id: int):
        while self._running:
            try:
                solver, task = await asyncio.wait_for(self.queue.get(), timeout=1.0)
            except asyncio.TimeoutError:
                continue
            try:
                self.finished.append(await solver.process_task(task, self._executor))
            except Exception as e:
                self.logger.error(f"Worker {worker_id} error: {e}")
            finally:
                self.queue.task_done()

    async def _stop(self):
        self._running = False
        await asyncio.gather(*self._workers, return_exceptions=True)
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
        self.logger.debug("Solver workers stopped")

    async def run_batch(self, rows: List[Row]) -> List[Task]:
        """Solve every (table id, payload) row; tasks come back in submission order."""
        self.queue = asyncio.Queue()
        await self._start()
        try:
            tasks = [await self.submit(table_id, payload) for table_id, payload in rows]
            await self.queue.join()
        finally:
            await self._stop()
        return tasks

    def solve_all(self, rows: List[Row]) -> List[Task]:
        return asyncio.run(self.run_batch(rows))

    def status(self) -> Dict[str, Any]:
        completed = sum(task.status == "completed" for task in self.finished)
        return {
            'rows': len(self.finished),
            'completed': completed,
            'failed': len(self.finished) - completed,
            'solvers': {
                name: {
                    'tables': solver.table_ids,
                    'completed': len(solver.tasks_with_status("completed")),
                    'failed': len(solver.tasks_with_status("failed")),
                }
                for name, solver in self.solvers.items()
            },
            'running': self._running,
        }
