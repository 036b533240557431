"""Block pool for parallel simulation."""

import logging
import queue
import threading
from typing import Any, Callable, Optional, TypeVar

from persistlab.constants.messages import MC_BLOCK_FAILED, MC_WORKERS_POSITIVE
from persistlab.models import SimulationError

logger = logging.getLogger(__name__)

T = TypeVar("T")


class BlockPool:
    """Runs numbered blocks on background worker threads.

    Every block is a pure function of its index, so the number of workers only
    changes wall time. Results come back in index order.
    """

    def __init__(self, num_workers: int = 1, max_queue_size: int = 1000):
        """Initialize the pool.

        Args:
            num_workers: Number of worker threads.
            max_queue_size: Maximum number of block indices queued at once.
        """
        if num_workers < 1:
            raise ValueError(MC_WORKERS_POSITIVE.format(workers=num_workers))
        self.num_workers = num_workers
        self.max_queue_size = max_queue_size
        self.failures: list[tuple[int, Exception]] = []

    def _worker_loop(
        self,
        worker_id: int,
        tasks: queue.Queue,
        func: Callable[[int], Any],
        results: list,
        lock: threading.Lock,
    ) -> None:
        logger.debug(f"Worker {worker_id} started")
        while True:
            index = tasks.get()
            try:
                if index is None:
                    break
                try:
                    results[index] = func(index)
                except Exception as e:
                    logger.error(f"Block {index} failed in worker {worker_id}: {e}")
                    with lock:
                        self.failures.append((index, e))
            finally:
                tasks.task_done()
        logger.debug(f"Worker {worker_id} stopped")

    def map(self, func: Callable[[int], T], num_blocks: int) -> list[T]:
        """Evaluate ``func(0) ... func(num_blocks - 1)``.

        Args:
            func: Block function of the block index.
            num_blocks: Number of blocks.

        Returns:
            Block results in index order.

        Raises:
            SimulationError: A block raised; the lowest failing index is reported and
                its exception is chained as the cause.
        """
        self.failures = []
        results: list[Optional[T]] = [None] * num_blocks
        workers = min(self.num_workers, max(num_blocks, 1))

        if workers == 1:
            for index in range(num_blocks):
                try:
                    results[index] = func(index)
                except Exception as e:
                    self.failures.append((index, e))
                    break
        else:
            tasks: queue.Queue = queue.Queue(maxsize=self.max_queue_size)
            lock = threading.Lock()
            threads = [
                threading.Thread(
                    target=self._worker_loop,
                    args=(i, tasks, func, results, lock),
                    name=f"BlockWorker-{i}",
                    daemon=True,
                )
                for i in range(workers)
            ]
            for thread in threads:
                thread.start()
            for index in range(num_blocks):
                tasks.put(index)
            for _ in threads:
                tasks.put(None)
            for thread in threads:
                thread.join()
            logger.debug(f"Ran {num_blocks} blocks on {workers} workers")

        if self.failures:
            index, error = min(self.failures, key=lambda item: item[0])
            raise SimulationError(MC_BLOCK_FAILED.format(index=index, error=error)) from error
        return results  # type: ignore[return-value]

