"""Parameter sweeps over the closed-form bounds, tabulated as CSV.

A grid file fixes value lists for the seven axes (C, m, gamma, delta, d_G,
K_G, M_G) and selects bounds to evaluate.  One CSV row per grid cell, in
lexicographic cell order; cells that violate a bound's preconditions keep
their row with a status note instead of being dropped.
"""

from __future__ import annotations

import itertools
import json
import math
from pathlib import Path

from . import bounds as bd
from .capacity import DimOracle
from .errors import InputValidationError, PreconditionError
from .plotting import emit_plot
from .runio import RunManifest, parallel_map, write_csv

AXES = ("C", "m", "gamma", "delta", "d_G", "K_G", "M_G")

DEFAULT_AXES = {
    "C": [4],
    "m": [64],
    "gamma": [0.5],
    "delta": [0.05],
    "d_G": [2],
    "K_G": [1.0],
    "M_G": [1.0],
}

KNOWN_BOUNDS = ("t4", "t6", "t7")

TERM_COLUMNS = {
    "t4": ("value", "complexity", "complexity_sans_delta", "residual"),
    "t6": ("value", "tail", "sum"),
    "t7": ("value", "regime", "head", "chain", "F_C", "integral", "N"),
}


def _cell_reports(cell: dict, which: list[str], schedule_cfg: dict, L_emp: float):
    out = {}
    status = []
    for name in which:
        try:
            if name == "t4":
                d = cell["K_G"] * (cell["gamma"] / 8.0) ** (-cell["d_G"])
                rep = bd.linf_risk_bound_fatdim(L_emp, cell["C"], cell["m"], cell["gamma"],
                                                cell["M_G"], cell["delta"], d)
            elif name == "t7":
                rep = bd.parametric_rademacher_bound(cell["d_G"], cell["K_G"], cell["C"],
                                                     cell["m"], cell["gamma"], cell["M_G"])
            elif name == "t6":
                sched = _build_schedule(schedule_cfg, cell)
                oracle = DimOracle.parametric(cell["K_G"], cell["d_G"], M=cell["M_G"])
                rep = bd.chained_rademacher_bound(sched, cell["C"], cell["m"], cell["M_G"],
                                                  cell["gamma"], oracle)
            else:
                raise InputValidationError(f"unknown bound {name!r}")
        except (PreconditionError, InputValidationError) as e:
            out[name] = None
            reason = str(e).replace(",", ";").replace("\n", " ")
            status.append(f"{name}:{reason}")
            continue
        out[name] = rep
    return out, ("ok" if not status else "skip " + "; ".join(status))


def _build_schedule(cfg: dict, cell: dict) -> bd.ChainSchedule:
    name = cfg.get("name", "geometric_cgamma")
    if name == "geometric_cgamma":
        return bd.ChainSchedule.geometric_cgamma(cell["C"], cell["gamma"], int(cfg.get("N", 3)))
    if name == "quartic":
        return bd.ChainSchedule.quartic(cell["gamma"], int(cfg.get("N", 3)))
    if name == "sqrt_m_over_c":
        return bd.ChainSchedule.sqrt_m_over_c(cell["gamma"], cell["C"], cell["m"])
    if name == "power_law":
        return bd.ChainSchedule.power_law(cell["gamma"], cell["C"], cell["m"], cell["d_G"])
    raise InputValidationError(f"unknown schedule {name!r}")


def run_sweep(grid: dict, out_dir: str | Path) -> RunManifest:
    """Evaluate the selected bounds over the grid; write sweep.csv and figures."""
    axes = {**DEFAULT_AXES, **(grid.get("axes") or {})}
    unknown = set(axes) - set(AXES)
    if unknown:
        raise InputValidationError(f"unknown axes: {sorted(unknown)}")
    which = list(grid.get("bounds") or ["t4", "t7"])
    for name in which:
        if name not in KNOWN_BOUNDS:
            raise InputValidationError(f"unknown bound {name!r}; known: {KNOWN_BOUNDS}")
    schedule_cfg = grid.get("schedule") or {}
    L_emp = float(grid.get("L_emp", 0.0))
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    values = [axes[a] for a in AXES]
    cells = [dict(zip(AXES, combo)) for combo in itertools.product(*values)]
    for cell in cells:
        cell["C"] = int(cell["C"])
        cell["m"] = int(cell["m"])
        cell["d_G"] = int(cell["d_G"])

    computed = parallel_map(lambda c: _cell_reports(c, which, schedule_cfg, L_emp), cells)

    header = list(AXES) + ["status"]
    for name in which:
        header += [f"{name}.{t}" for t in TERM_COLUMNS[name]]
    rows = []
    for cell, (reports, status) in zip(cells, computed):
        row = [cell[a] for a in AXES] + [status]
        for name in which:
            rep = reports[name]
            for t in TERM_COLUMNS[name]:
                if rep is None:
                    row.append(None)
                elif t == "value":
                    row.append(rep.value)
                else:
                    row.append(rep.terms.get(t))
        rows.append(row)

    csv_path = out_dir / "sweep.csv"
    write_csv(csv_path, header, rows)

    manifest = RunManifest(kind="sweep", config=dict(grid), seed=int(grid.get("seed", 0)))
    manifest.outputs.append(str(csv_path))
    manifest.results = {"cells": len(cells), "bounds": which,
                        "ok": sum(1 for _, (r, s) in zip(cells, computed) if s == "ok")}
    for k, plot_spec in enumerate(grid.get("plots") or []):
        out_name = plot_spec.get("out", f"sweep_plot_{k}.svg")
        svg_path = out_dir / out_name
        emit_plot(csv_path, plot_spec, svg_path)
        manifest.outputs.append(str(svg_path))
    manifest.write(out_dir)
    return manifest


def load_grid(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise InputValidationError(f"{path}:{e.lineno}: invalid JSON ({e.msg})") from e
