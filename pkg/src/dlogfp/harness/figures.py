"""Bar charts of bucket counts."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ..analysis import BUCKET_LABELS, Histogram  # noqa: E402

WIDTH_PX = 800
HEIGHT_PX = 480
# SVG user units are points at 72 per inch
_DPI = 72

_STYLE = {
    "font.size": 11,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "dlogfp",
    "svg.fonttype": "none",
}


def write_bar_chart(h: Histogram, title: str, base: Path) -> Path:
    """Write ``base``.svg (800x480) and a ``base``.dat companion; return the svg path."""
    base = Path(base)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH_PX / _DPI, HEIGHT_PX / _DPI), dpi=_DPI)
        xs = range(len(h.counts))
        bars = ax.bar(xs, h.counts, color="#4c72b0", width=0.7)
        ax.bar_label(bars, labels=[str(c) for c in h.counts], padding=2)
        ax.set_xticks(list(xs), BUCKET_LABELS)
        ax.set_xlabel(r"$\log_p |\delta|$")
        ax.set_ylabel("number of primes")
        ax.set_title(title)
        ax.set_ylim(0, max(max(h.counts), 1) * 1.12)
        fig.tight_layout()
        svg = base.with_suffix(".svg")
        fig.savefig(svg, format="svg", metadata={"Date": None})
        plt.close(fig)
    text = svg.read_text(encoding="utf-8")
    text = text.replace(f'width="{WIDTH_PX}pt" height="{HEIGHT_PX}pt"', f'width="{WIDTH_PX}" height="{HEIGHT_PX}"', 1)
    svg.write_text(text, encoding="utf-8")
    lines = ["# bucket label count"]
    lines += [f"{j} {lab} {c}" for j, (lab, c) in enumerate(zip(BUCKET_LABELS, h.counts))]
    base.with_suffix(".dat").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return svg
