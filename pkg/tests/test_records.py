"""Tests for result files."""

import pytest

from persistlab.models import ResultRecord
from persistlab.utils.records import read_records, record_writer, write_csv


def _record(n):
    return ResultRecord(command="mc", config={"n": n}, payload={"value": 1.0 / n}, version="0")


def test_records_are_appended(tmp_path):
    """Each writer appends; earlier lines stay."""
    path = str(tmp_path / "nested" / "mc.jsonl")
    with record_writer(path) as out:
        out.write(_record(1))
        out.write(_record(2))
        assert out.count == 2
    with record_writer(path) as out:
        out.write(_record(3))
    assert [r.config["n"] for r in read_records(path)] == [1, 2, 3]


def test_lines_survive_a_failure(tmp_path):
    path = str(tmp_path / "mc.jsonl")
    with pytest.raises(RuntimeError):
        with record_writer(path) as out:
            out.write(_record(1))
            raise RuntimeError("interrupted")
    assert len(read_records(path)) == 1


def test_read_records_skips_blank_lines(tmp_path):
    path = tmp_path / "mc.jsonl"
    path.write_text(_record(4).to_json() + "\n\n")
    assert len(read_records(str(path))) == 1


def test_csv_floats_are_repr_exact(tmp_path):
    path = tmp_path / "out" / "table.csv"
    write_csv(str(path), ("n", "value"), [(1, 0.1), (2, 1 / 3)])
    assert path.read_text().splitlines() == ["n,value", "1,0.1", f"2,{1 / 3!r}"]
