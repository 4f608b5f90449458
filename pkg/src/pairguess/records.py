"""Round records and their line-delimited JSON file format.

One JSON object per line with integer fields ``round``, ``x``, ``j`` and
``guess``. Indices are 1-based; ``j`` refers to the lexicographic pair sets
of :func:`pairguess.game.canonical_spec`. Extra fields are ignored.
"""
from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from .errors import InvalidRecord

FIELDS = ("round", "x", "j", "guess")


@dataclass(frozen=True, slots=True)
class RoundRecord:
    round: int
    x: int
    j: int
    guess: int

    def to_json(self) -> str:
        return json.dumps(
            {"round": self.round, "x": self.x, "j": self.j, "guess": self.guess},
            separators=(", ", ": "),
        )


def parse_line(line: str, lineno: int | None = None) -> RoundRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise InvalidRecord(f"malformed JSON ({exc.msg})", lineno, "line") from None
    if not isinstance(obj, dict):
        raise InvalidRecord("expected a JSON object", lineno, "line")
    values = []
    for name in FIELDS:
        if name not in obj:
            raise InvalidRecord(f"missing field {name!r}", lineno, "line")
        v = obj[name]
        if isinstance(v, bool) or not isinstance(v, int):
            raise InvalidRecord(f"field {name!r} must be an integer, got {v!r}", lineno, "line")
        values.append(v)
    return RoundRecord(*values)


def read_records(source: str | os.PathLike | IO[str]) -> Iterator[RoundRecord]:
    """Stream records from a path or an open text file.

    Blank lines are skipped; any other unparsable line raises
    :class:`InvalidRecord` carrying its line number.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            yield from read_records(fh)
        return
    for lineno, line in enumerate(source, start=1):
        if line.strip():
            yield parse_line(line, lineno)


def write_records(records: Iterable[RoundRecord], dest: str | os.PathLike | IO[str]) -> int:
    """Write records one per line; returns the number written."""
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8") as fh:
            return write_records(records, fh)
    count = 0
    for rec in records:
        dest.write(rec.to_json())
        dest.write("\n")
        count += 1
    return count


def dumps(records: Iterable[RoundRecord]) -> str:
    buf = io.StringIO()
    write_records(records, buf)
    return buf.getvalue()
