"""Deterministic SVG figures from CSV columns.

Rendering is a pure function of the input bytes: the SVG hash salt is pinned,
fonts are emitted as text elements, and the creation date is stripped, so
identical CSV and plot spec produce identical SVG bytes.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import InputValidationError

_RC = {
    "svg.hashsalt": "capacity-lab",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 100,
    "path.simplify": False,
}


def _read_columns(csv_path: Path, names: list[str]) -> dict[str, list[float]]:
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [n for n in names if n not in (reader.fieldnames or [])]
        if missing:
            raise InputValidationError(f"CSV {csv_path} is missing column(s): {missing}")
        cols: dict[str, list[float]] = {n: [] for n in names}
        for row in reader:
            if any(row[n] in (None, "") for n in names):
                continue  # precondition-skipped cells
            for n in names:
                try:
                    cols[n].append(float(row[n]))
                except ValueError as e:
                    raise InputValidationError(f"column {n!r}: non-numeric cell {row[n]!r}") from e
    if not cols[names[0]]:
        raise InputValidationError("no usable data rows for the selected columns")
    return cols


def emit_plot(csv_path: str | Path, spec: dict, out_path: str | Path) -> Path:
    """Render a line or scatter figure of CSV columns to an SVG file.

    Spec keys: x (column name), y (column name or list), kind ("line" or
    "scatter"), logx / logy (bools), xlabel, ylabel, title.  Missing columns
    raise InputValidationError naming them.
    """
    csv_path = Path(csv_path)
    out_path = Path(out_path)
    if "x" not in spec or "y" not in spec:
        raise InputValidationError("plot spec needs 'x' and 'y'")
    x_name = spec["x"]
    y_names = spec["y"] if isinstance(spec["y"], (list, tuple)) else [spec["y"]]
    kind = spec.get("kind", "line")
    if kind not in ("line", "scatter"):
        raise InputValidationError(f"kind must be 'line' or 'scatter', got {kind!r}")
    cols = _read_columns(csv_path, [x_name] + list(y_names))
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for y_name in y_names:
            if kind == "line":
                ax.plot(cols[x_name], cols[y_name], marker="o", label=y_name)
            else:
                ax.scatter(cols[x_name], cols[y_name], label=y_name)
        if spec.get("logx"):
            ax.set_xscale("log")
        if spec.get("logy"):
            ax.set_yscale("log")
        ax.set_xlabel(spec.get("xlabel", x_name))
        ax.set_ylabel(spec.get("ylabel", ", ".join(y_names)))
        if spec.get("title"):
            ax.set_title(spec["title"])
        ax.legend()
        ax.grid(True, alpha=0.4)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return out_path
