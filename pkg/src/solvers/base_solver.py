import asyncio
import logging
import time
import uuid
from abc import ABC, abstractmethod
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..numtheory.primes import PrimeSieve


@dataclass
class Task:
    """One table row in flight: table id, row payload and the solver's answer."""
    table_id: str
    payload: Dict[str, Any] = field(default_factory=dict)
    id: str = field(default_factory=lambda: uuid.uuid4().hex[:12])
    status: str = "pending"  # pending, running, completed, failed
    computed: Optional[int] = None
    error: Optional[str] = None
    elapsed: float = 0.0

    @property
    def m(self) -> Optional[int]:
        return self.payload.get('m')


class BaseSolver(ABC):
    """Computes one family of table rows; CPU work runs in an executor thread."""

    def __init__(self, name: str, table_ids: List[str], sieve: Optional[PrimeSieve]):
        self.name = name
        self.table_ids = table_ids
        self.sieve = sieve
        self.logger = logging.getLogger(f"solver.{name}")
        self._history: List[Task] = []

    @abstractmethod
    def solve(self, task: Task) -> int:
        """Return the computed value for the task's row."""

    def can_handle(self, table_id: str) -> bool:
        return table_id in self.table_ids

    def accept(self, table_id: str, payload: Dict[str, Any]) -> Task:
        task = Task(table_id, payload)
        self._history.append(task)
        return task

    def tasks_with_status(self, status: str) -> List[Task]:
        return [task for task in self._history if task.status == status]

    def _reject(self, task: Task) -> bool:
        if not self.can_handle(task.table_id):
            task.error = f"solver {self.name} does not compute table {task.table_id}"
        elif task.m is None:
            task.error = f"row {task.id} of {task.table_id} has no m"
        else:
            return False
        task.status = "failed"
        return True

    async def process_task(self, task: Task, executor: Optional[Executor] = None) -> Task:
        """Run solve() off the event loop; any exception marks the row failed."""
        if self._reject(task):
            return task

        task.status = "running"
        started = time.monotonic()
        self.logger.info(f"Starting {task.table_id} m={task.m}")
        try:
            loop = asyncio.get_running_loop()
            task.computed = await loop.run_in_executor(executor, self.solve, task)
            task.status = "completed"
            self.logger.info(f"Completed {task.table_id} m={task.m}: {task.computed}")
        except Exception as e:
            task.status = "failed"
            task.error = str(e)
            self.logger.error(f"{task.table_id} m={task.m} failed: {e}")
        finally:
            task.elapsed = time.monotonic() - started
        return task
