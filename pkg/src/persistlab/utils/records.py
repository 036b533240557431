"""Append-only result files."""

import csv
import os
from contextlib import contextmanager
from typing import Iterable, Iterator, Sequence, TextIO

from persistlab.models import ResultRecord


class RecordWriter:
    """Writes ResultRecords as JSON lines to an open stream."""

    def __init__(self, stream: TextIO):
        self.stream = stream
        self.count = 0

    def write(self, record: ResultRecord) -> None:
        self.stream.write(record.to_json() + "\n")
        self.count += 1


@contextmanager
def record_writer(path: str) -> Iterator[RecordWriter]:
    """Open a JSON-lines results file for appending.

    Yields:
        RecordWriter bound to the file.

    Raises:
        Exception: Any exception raised inside the block. Lines written before the
            failure stay in the file; the file is flushed either way.

    Example:
        with record_writer("results/mc.jsonl") as out:
            out.write(record)
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    stream = open(path, "a", encoding="utf-8", newline="\n")
    try:
        yield RecordWriter(stream)
        stream.flush()
    finally:
        stream.close()


def read_records(path: str) -> list[ResultRecord]:
    """Parse every non-blank line of a JSON-lines results file."""
    with open(path, encoding="utf-8") as stream:
        return [ResultRecord.from_json(line) for line in stream if line.strip()]


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    """Write a plot-ready CSV file ('.' decimals, repr-exact floats)."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
