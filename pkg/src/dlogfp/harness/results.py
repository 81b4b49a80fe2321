"""results.csv reading and writing."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Union

from ..counting import PrimeRecord

COLUMNS = (
    "p",
    "phi_p1",
    "d_p1",
    "sigma_p1",
    "f_any",
    "f_pr_rppr",
    "delta",
    "log_ratio",
    "model_variance",
    "cz_ok",
    "prop42_ok",
    "thm48_ok",
)


class ResultsFormatError(ValueError):
    def __init__(self, path, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class ResultRow:
    p: int
    phi_p1: int
    d_p1: int
    sigma_p1: int
    f_any: int
    f_pr_rppr: int
    delta: int
    log_ratio: Optional[float]
    model_variance: int
    cz_ok: bool
    prop42_ok: bool
    thm48_ok: bool

    @classmethod
    def from_record(cls, rec: PrimeRecord) -> "ResultRow":
        return cls(
            rec.p,
            rec.phi_p1,
            rec.d_p1,
            rec.sigma_p1,
            rec.f_any,
            rec.f_pr_rppr,
            rec.delta,
            rec.log_ratio,
            rec.model_variance,
            rec.cz_ok,
            rec.prop42_ok,
            rec.thm48_ok,
        )

    def to_fields(self) -> List[str]:
        lr = "" if self.log_ratio is None else format(self.log_ratio, ".12g")
        return [
            str(self.p),
            str(self.phi_p1),
            str(self.d_p1),
            str(self.sigma_p1),
            str(self.f_any),
            str(self.f_pr_rppr),
            str(self.delta),
            lr,
            str(self.model_variance),
            str(int(self.cz_ok)),
            str(int(self.prop42_ok)),
            str(int(self.thm48_ok)),
        ]


def dumps(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow(row.to_fields())
    return buf.getvalue()


def write_results(path: Union[str, Path], rows: Iterable[ResultRow]) -> None:
    Path(path).write_text(dumps(rows), encoding="utf-8", newline="\n")


def _flag(s: str) -> bool:
    if s not in ("0", "1"):
        raise ValueError(f"expected 0 or 1, got {s!r}")
    return s == "1"


def read_results(path: Union[str, Path]) -> List[ResultRow]:
    """Parse results.csv. Raises ResultsFormatError naming the bad line."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return []
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ResultsFormatError(path, 1, f"unexpected header {header!r}")
    rows: List[ResultRow] = []
    for lineno, fields in enumerate(reader, start=2):
        if not fields:
            continue
        if len(fields) != len(COLUMNS):
            raise ResultsFormatError(path, lineno, f"expected {len(COLUMNS)} fields, got {len(fields)}")
        try:
            ints = [int(x) for x in fields[:7]]
            lr = float(fields[7]) if fields[7] else None
            row = ResultRow(*ints, lr, int(fields[8]), *(_flag(x) for x in fields[9:]))
        except ValueError as exc:
            raise ResultsFormatError(path, lineno, str(exc)) from None
        if (row.delta == 0) != (row.log_ratio is None):
            raise ResultsFormatError(path, lineno, "log_ratio must be empty exactly when delta is 0")
        if rows and row.p <= rows[-1].p:
            raise ResultsFormatError(path, lineno, "rows not strictly ascending in p")
        rows.append(row)
    return rows
