"""Ensemble files.

Two line formats, one record per line:

* compact: ``step_index,assignment`` where ``assignment`` has one base-36
  digit per unit in lexicographic unit order (k <= 36);
* JSON lines: ``{"step": n, "assign": [...]}`` (any k).

Readers accept either format, line by line.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from .errors import EnsembleFormatError
from .graph import DualGraph, Plan, validate_plan
from .recom import EnsembleRecord

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
_DIGIT_VALUE = {c: i for i, c in enumerate(DIGITS)}


def encode_assignment(assignment: Iterable[int]) -> str:
    return "".join(DIGITS[d] for d in assignment)


def decode_assignment(text: str) -> tuple[int, ...]:
    try:
        return tuple(_DIGIT_VALUE[c] for c in text.lower())
    except KeyError as exc:
        raise EnsembleFormatError(f"invalid base-36 digit {exc.args[0]!r}") from None


def format_record(record: EnsembleRecord, fmt: str) -> str:
    if fmt == "jsonl":
        return json.dumps({"step": record.step_index, "assign": list(record.plan.assignment)},
                          separators=(",", ":"))
    if record.plan.k > len(DIGITS):
        raise EnsembleFormatError(f"compact format supports at most 36 districts, k={record.plan.k}")
    return f"{record.step_index},{encode_assignment(record.plan.assignment)}"


def choose_format(path, k: int, fmt: str = "auto") -> str:
    if fmt not in ("auto", "compact", "jsonl"):
        raise EnsembleFormatError(f"unknown ensemble format {fmt!r}")
    if fmt != "auto":
        return fmt
    if k > len(DIGITS) or str(path).endswith(".jsonl"):
        return "jsonl"
    return "compact"


class EnsembleWriter:
    """Record sink that appends formatted lines to a file."""

    def __init__(self, path, k: int, fmt: str = "auto"):
        self.path = Path(path)
        self.fmt = choose_format(path, k, fmt)
        self._fh = open(self.path, "w", encoding="utf-8", newline="\n")
        self.count = 0

    def __call__(self, record: EnsembleRecord) -> None:
        self._fh.write(format_record(record, self.fmt) + "\n")
        self.count += 1

    def flush(self) -> None:
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def parse_line(line: str, k: int | None = None) -> EnsembleRecord:
    line = line.strip()
    if line.startswith("{"):
        try:
            obj = json.loads(line)
            step, assign = int(obj["step"]), tuple(int(d) for d in obj["assign"])
        except (ValueError, KeyError, TypeError) as exc:
            raise EnsembleFormatError(f"bad JSON ensemble record: {exc}") from None
    else:
        head, sep, digits = line.partition(",")
        if not sep:
            raise EnsembleFormatError(f"bad ensemble record {line[:40]!r}")
        try:
            step = int(head)
        except ValueError:
            raise EnsembleFormatError(f"bad step index {head!r}") from None
        assign = decode_assignment(digits)
    if not assign:
        raise EnsembleFormatError(f"record {step} has an empty assignment")
    # Every district of a valid plan is nonempty, so k is recoverable per record.
    return EnsembleRecord(step, Plan(assign, k if k is not None else max(assign) + 1))


def read_ensemble(
    path, graph: DualGraph | None = None, k: int | None = None, validate: bool = False
) -> Iterator[EnsembleRecord]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = parse_line(line, k)
            except EnsembleFormatError as exc:
                raise EnsembleFormatError(f"{path}:{lineno}: {exc}") from None
            if graph is not None:
                if len(record.plan.assignment) != len(graph):
                    raise EnsembleFormatError(
                        f"{path}:{lineno}: assignment has {len(record.plan.assignment)} "
                        f"entries, graph has {len(graph)} units"
                    )
                if validate:
                    validate_plan(graph, record.plan)
            yield record


def write_ensemble(path, records: Iterable[EnsembleRecord], k: int, fmt: str = "auto") -> int:
    with EnsembleWriter(path, k, fmt) as w:
        for rec in records:
            w(rec)
        return w.count
