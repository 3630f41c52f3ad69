"""Render figure CSVs produced by the icfeedback CLI as image files.

The input schema is `x,scheme,value` with a header row.  One line is drawn
per scheme; rendering is a pure function of the CSV (fixed style, no
timestamps), so re-running on the same input produces identical bytes.

These scripts never compute rates; the CLI output is the single source of
numerical truth.

Usage: plot_figure <figure-id> <csv> <out.png>
"""

from __future__ import annotations

import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


class SchemaError(Exception):
    """Input CSV does not follow the x,scheme,value convention."""


FIGURE_AXES = {
    "rate-vs-alpha-high-snr": ("alpha = log INR / log SNR", "symmetric rate (bits/channel use)"),
    "rate-vs-alpha-low-snr": ("alpha = log INR / log SNR", "symmetric rate (bits/channel use)"),
    "gdof-curve": ("alpha = log INR / log SNR", "per-user GDoF"),
    "strong-ic": ("SNR (dB)", "symmetric rate (bits/channel use)"),
    "weak-ic": ("SNR (dB)", "symmetric rate (bits/channel use)"),
}

# split line segments across this x when present (GDoF is undefined there)
GAP_AT_ONE = {"gdof-curve"}

_STYLE = {
    "proposed": {"color": "#1f77b4", "marker": "o"},
    "kramer": {"color": "#d62728", "marker": "s"},
    "suh-tse": {"color": "#2ca02c", "marker": "^"},
    "outer-bound": {"color": "#7f7f7f", "linestyle": "--"},
    "mtp": {"color": "#9467bd", "marker": "v"},
    "gdof": {"color": "#1f77b4", "marker": "o"},
}


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    figure_id: str
    out_path: str
    x_label: str | None = None
    y_label: str | None = None


def read_series(csv_path: str) -> dict[str, list[tuple[float, float]]]:
    """Parse the x,scheme,value CSV into per-scheme sorted point lists."""
    series: dict[str, list[tuple[float, float]]] = {}
    try:
        with open(csv_path, "r", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise SchemaError(f"cannot read {csv_path}: {exc}") from exc
    if not rows or [c.strip() for c in rows[0]] != ["x", "scheme", "value"]:
        raise SchemaError("expected header row 'x,scheme,value'")
    if len(rows) == 1:
        raise SchemaError("no data rows")
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise SchemaError(f"line {lineno}: expected 3 fields, got {len(row)}")
        try:
            x, value = float(row[0]), float(row[2])
        except ValueError as exc:
            raise SchemaError(f"line {lineno}: non-numeric x or value") from exc
        series.setdefault(row[1].strip(), []).append((x, value))
    for pts in series.values():
        pts.sort()
    return series


def _segments(points, split_at):
    if split_at is None:
        return [points]
    return [
        [p for p in points if p[0] < split_at],
        [p for p in points if p[0] > split_at],
    ]


def render(spec: PlotSpec) -> str:
    """Draw one line per scheme and write the image; returns the output path."""
    if spec.figure_id not in FIGURE_AXES:
        raise SchemaError(f"unknown figure id {spec.figure_id!r}")
    series = read_series(spec.csv_path)
    x_default, y_default = FIGURE_AXES[spec.figure_id]
    split_at = 1.0 if spec.figure_id in GAP_AT_ONE else None

    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=120)
    for scheme in sorted(series):
        style = dict(_STYLE.get(scheme, {}))
        style.setdefault("linestyle", "-")
        style.setdefault("markersize", 3.5)
        first = True
        for seg in _segments(series[scheme], split_at):
            if not seg:
                continue
            xs = [p[0] for p in seg]
            ys = [p[1] for p in seg]
            ax.plot(xs, ys, label=scheme if first else None, **style)
            first = False
    ax.set_xlabel(spec.x_label or x_default)
    ax.set_ylabel(spec.y_label or y_default)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    # suppress the Software tag so output bytes depend only on the data
    fig.savefig(spec.out_path, metadata={"Software": None})
    plt.close(fig)
    return spec.out_path


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 3:
        sys.stderr.write("usage: plot_figure <figure-id> <csv> <out.png>\n")
        return 64
    figure_id, csv_path, out_path = argv
    try:
        render(PlotSpec(csv_path=csv_path, figure_id=figure_id, out_path=out_path))
    except SchemaError as exc:
        sys.stderr.write(f"plot_figure: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
