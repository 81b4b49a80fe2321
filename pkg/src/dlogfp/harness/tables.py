"""Bucket tables of log_p|delta|, their text/CSV forms, and the comparison
against the published counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

from ..analysis import BUCKET_LABELS, EDGES, Histogram, bucket_index, passes_filter, tally

# name -> (sign filter, caption)
TABLES: Dict[str, Tuple[str, str]] = {
    "positive": ("non-negative", "Values of delta >= 0"),
    "negative": ("negative", "Values of delta < 0"),
    "all": ("all", "All values of |delta|"),
}

PAPER_COUNTS: Dict[str, Tuple[int, ...]] = {
    "positive": (23, 69, 285, 353, 65, 1),
    "negative": (17, 78, 316, 542, 51, 0),
    "all": (40, 147, 601, 895, 116, 1),
}

# log ratios this close to a bucket edge could land on either side under a
# different floating-point evaluation
EDGE_SLACK = 1e-9


def build_tables(rows: Sequence) -> Dict[str, Histogram]:
    return {name: tally(rows, flt) for name, (flt, _) in TABLES.items()}


def table_csv(h: Histogram) -> str:
    lines = ["bucket_label,count"]
    lines += [f"{lab},{c}" for lab, c in zip(BUCKET_LABELS, h.counts)]
    lines += [f"#total,{h.total}", f"#zero,{h.zero_count}", f"#overflow,{h.overflow_count}"]
    return "\n".join(lines) + "\n"


def table_text(h: Histogram, caption: str) -> str:
    head = ["log_p|delta|", *BUCKET_LABELS, "total"]
    vals = ["# of p", *(str(c) for c in h.counts), str(h.total)]
    widths = [max(len(a), len(b)) for a, b in zip(head, vals)]
    fmt = lambda cells: " | ".join(c.rjust(w) for c, w in zip(cells, widths))
    return "\n".join(
        [
            caption,
            fmt(head),
            "-+-".join("-" * w for w in widths),
            fmt(vals),
            f"zero (delta = 0, not tallied): {h.zero_count}",
            f"overflow (|delta| > p): {h.overflow_count}",
        ]
    ) + "\n"


@dataclass
class BucketDeviation:
    table: str
    bucket: int
    ours: int
    published: int
    # (prime, reason) pairs that account for the difference
    items: List[Tuple[int, str]] = field(default_factory=list)
    explained: bool = False

    @property
    def deviation(self) -> int:
        return self.ours - self.published


def _edge_neighbors(row) -> List[int]:
    """Buckets a boundary-sensitive row could plausibly have been put in."""
    r = row.log_ratio
    out = []
    for k, e in enumerate(EDGES[1:-1], start=1):
        if abs(r - e) < EDGE_SLACK:
            out.append(k - 1 if r >= e else k)
    return out


def compare_with_paper(rows: Sequence) -> List[BucketDeviation]:
    """Every bucket where our tables differ from the published ones, itemized.

    Two mechanisms are tried, in order: primes with delta = 0 counted in the
    first bucket (what taking log of 0 as -inf and clamping would do), and
    log ratios sitting on a bucket edge.
    """
    tables = build_tables(rows)
    out: List[BucketDeviation] = []
    for name, (flt, _) in TABLES.items():
        h = tables[name]
        paper = PAPER_COUNTS[name]
        kept = [r for r in rows if passes_filter(r.delta, flt)]
        zeros = [r.p for r in kept if r.delta == 0]
        adjusted = list(h.counts)
        items: Dict[int, List[Tuple[int, str]]] = {j: [] for j in range(6)}
        residual = [paper[j] - adjusted[j] for j in range(6)]
        if zeros and residual[0] > 0:
            take = zeros[: residual[0]]
            adjusted[0] += len(take)
            items[0] += [(p, "delta = 0; published table counts it in the first bucket") for p in take]
        for r in kept:
            if r.log_ratio is None:
                continue
            j = bucket_index(r.log_ratio)
            if j is None:
                continue
            for k in _edge_neighbors(r):
                if adjusted[j] > paper[j] and adjusted[k] < paper[k]:
                    adjusted[j] -= 1
                    adjusted[k] += 1
                    items[j].append((r.p, f"log ratio {r.log_ratio:.12g} on edge; moved to bucket {k}"))
                    items[k].append((r.p, f"log ratio {r.log_ratio:.12g} on edge; moved from bucket {j}"))
        for j in range(6):
            if h.counts[j] != paper[j]:
                out.append(
                    BucketDeviation(name, j, h.counts[j], paper[j], items[j], adjusted[j] == paper[j])
                )
    return out


def write_tables(rows: Sequence, out_dir: Path, plots: bool = True) -> Dict[str, Path]:
    from .figures import write_bar_chart

    out_dir.mkdir(parents=True, exist_ok=True)
    written: Dict[str, Path] = {}
    for name, h in build_tables(rows).items():
        caption = TABLES[name][1]
        base = out_dir / f"table_{name}"
        base.with_suffix(".csv").write_text(table_csv(h), encoding="utf-8", newline="\n")
        base.with_suffix(".txt").write_text(table_text(h, caption), encoding="utf-8", newline="\n")
        written[name] = base
        if plots:
            write_bar_chart(h, caption, out_dir / f"figure_{name}")
    return written
