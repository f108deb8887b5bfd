"""Coverage reporting: delimited tables plus rendered figures."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .explain import CoverageReport

_SOURCES = ("glossary_only", "mined_only", "both")
_COLORS = {"glossary_only": "#7b52a1", "mined_only": "#2e9e5b", "both": "#c0392b"}


def write_coverage_tsv(coverage: CoverageReport, path) -> Path:
    path = Path(path)
    lines = ["category\tglossary_only\tmined_only\tboth\ttotal"]
    for category, glossary_only, mined_only, both in coverage.as_rows():
        total = glossary_only + mined_only + both
        lines.append(f"{category}\t{glossary_only}\t{mined_only}\t{both}\t{total}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def render_coverage_figure(coverage: CoverageReport, path) -> Path:
    """Grouped bars of explained concepts per category, split by source."""
    path = Path(path)
    rows = coverage.as_rows()
    categories = [row[0] for row in rows]
    values = {
        "glossary_only": [row[1] for row in rows],
        "mined_only": [row[2] for row in rows],
        "both": [row[3] for row in rows],
    }
    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.25
    for i, source in enumerate(_SOURCES):
        xs = [x + (i - 1) * width for x in range(len(categories))]
        bars = ax.bar(xs, values[source], width=width, label=source.replace("_", " "),
                      color=_COLORS[source])
        ax.bar_label(bars, padding=2, fontsize=8)
    ax.set_xticks(range(len(categories)))
    ax.set_xticklabels(categories)
    ax.set_ylabel("explained concepts")
    ax.set_title("Explanation coverage by source")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_report(coverage: CoverageReport, out_dir) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tsv = write_coverage_tsv(coverage, out_dir / "coverage.tsv")
    png = render_coverage_figure(coverage, out_dir / "coverage.png")
    return tsv, png
