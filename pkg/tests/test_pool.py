"""Tests for the block pool."""

import threading

import pytest

from persistlab.models import SimulationError
from persistlab.services.pool import BlockPool


def test_results_come_back_in_block_order():
    """Whatever the worker count, results are ordered by block index."""
    for workers in (1, 2, 5):
        assert BlockPool(num_workers=workers).map(lambda b: b * b, 12) == [
            b * b for b in range(12)
        ]


def test_blocks_run_on_worker_threads():
    names = set()
    lock = threading.Lock()

    def record(b):
        with lock:
            names.add(threading.current_thread().name)
        return b

    BlockPool(num_workers=3).map(record, 30)
    assert names and all(name.startswith("BlockWorker-") for name in names)


def test_empty_map():
    assert BlockPool(num_workers=4).map(lambda b: b, 0) == []


def test_invalid_worker_count():
    with pytest.raises(ValueError):
        BlockPool(num_workers=0)


@pytest.mark.parametrize("workers", [1, 3])
def test_failure_reports_lowest_block(workers):
    """A failing block raises SimulationError chained to the original error."""

    def fail(b):
        if b in (4, 7):
            raise RuntimeError(f"block {b}")
        return b

    pool = BlockPool(num_workers=workers)
    with pytest.raises(SimulationError) as excinfo:
        pool.map(fail, 10)
    assert "4" in str(excinfo.value)
    assert isinstance(excinfo.value.__cause__, RuntimeError)
