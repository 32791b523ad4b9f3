"""Command-line interface.

Subcommands: verify (inequality suites), capacity (one measure of one class
file), bounds (one closed-form evaluator from a params file), sweep (grid to
CSV and figures), experiment (coverage simulation), plot (CSV to SVG).
Config, grid, and params files are JSON.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import bounds as bd
from . import capacity as cap
from .errors import CapacityLabError
from .experiment import run_experiment
from .fclass import load_tabulated_class, load_vector_class, LabeledSample
from .metric import PNorm
from .plotting import emit_plot
from .rademacher import rademacher_exact
from .risk import load_distribution
from .sweep import load_grid, run_sweep
from .verify import SUITES, run_verify


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


@click.group()
def main() -> None:
    """Capacity measures of finite function classes and the bounds they obey."""


@main.command()
@click.option("--suite", "suites", multiple=True, type=click.Choice(sorted(SUITES)),
              help="Run only the named suite(s); repeatable.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--caps", "caps_file", type=click.Path(exists=True), default=None,
              help="JSON file overriding size caps.")
@click.option("--counts", "counts_file", type=click.Path(exists=True), default=None,
              help="JSON file overriding per-suite instance counts.")
@click.option("--out", "out_dir", type=click.Path(), default="verify_out", show_default=True)
def verify(suites, seed, caps_file, counts_file, out_dir) -> None:
    """Check every lemma inequality against brute-force computation."""
    config = {"seed": seed}
    if suites:
        config["suites"] = list(suites)
    if caps_file:
        config["caps"] = _load_json(caps_file)
    if counts_file:
        config["counts"] = _load_json(counts_file)
    manifest = run_verify(config, out_dir)
    for name, res in manifest.results.items():
        status = "PASS" if res["failed"] == 0 else "FAIL"
        click.echo(f"{status} {name}: {res['checks']} checks, {res['failed']} failed, "
                   f"{res['skips']} skipped ({res['elapsed_s']:.2f}s)")
    sys.exit(manifest.exit_code)


@main.command()
@click.option("--class", "class_file", required=True, type=click.Path(exists=True))
@click.option("--measure", required=True,
              type=click.Choice(["covering", "packing", "fatdim", "rademacher"]))
@click.option("--eps", type=float, default=None,
              help="Radius, or the margin for fatdim.")
@click.option("--p", "p_text", default="2", show_default=True,
              help="Norm exponent: 1, 2, ... or inf.")
@click.option("--exact/--greedy", "exact", default=True, show_default=True)
@click.option("--caps", "caps_file", type=click.Path(exists=True), default=None)
def capacity(class_file, measure, eps, p_text, exact, caps_file) -> None:
    """Compute one capacity measure of a tabulated class file."""
    F = load_tabulated_class(class_file)
    caps = cap.Caps.from_dict(_load_json(caps_file) if caps_file else None)
    pts = tuple(range(F.ground.n))
    if measure == "rademacher":
        est = rademacher_exact(F, pts, caps=caps)
        click.echo(json.dumps({"value": est.value, "method": est.method}))
        return
    if eps is None:
        raise click.UsageError("--eps is required for this measure")
    if measure == "fatdim":
        res = cap.fat_shattering_dim(F, eps, caps=caps)
        out = {"dim": res.dim, "witness_values": list(res.witness_values)}
        if res.certificate:
            out["points"] = list(res.certificate.points)
            out["witnesses"] = list(res.certificate.witnesses)
        click.echo(json.dumps(out))
        return
    p = PNorm.parse(p_text)
    mode = "exact" if exact else "greedy"
    q = cap.CapacityQuery(eps=eps, p=p, mode=mode, measure=measure)
    if measure == "packing":
        res = cap.packing_number(F, pts, q, caps=caps)
    else:
        res = cap.covering_number(F, pts, q, caps=caps)
    click.echo(json.dumps({"value": res.value, "exact": res.exact}))


def _bound_from_params(which: str, params: dict) -> bd.BoundReport:
    if which == "t2":
        return bd.linf_risk_bound_covering(params["L_emp"], int(params["cov"]),
                                           int(params["m"]), params["delta"])
    if which == "t4":
        return bd.linf_risk_bound_fatdim(params["L_emp"], int(params["C"]), int(params["m"]),
                                         params["gamma"], params["M_G"], params["delta"],
                                         params["d"])
    if which == "t5":
        return bd.l2_risk_bound(params["L_emp"], params["R_m"], params["gamma"],
                                int(params["m"]), params["delta"])
    if which == "t6":
        sched_cfg = params["schedule"]
        oracle_cfg = params["oracle"]
        C, m = int(params["C"]), int(params["m"])
        gamma, M_G = params["gamma"], params["M_G"]
        name = sched_cfg.get("name", "geometric_cgamma")
        if name == "geometric_cgamma":
            sched = bd.ChainSchedule.geometric_cgamma(C, gamma, int(sched_cfg.get("N", 3)))
        elif name == "quartic":
            sched = bd.ChainSchedule.quartic(gamma, int(sched_cfg.get("N", 3)))
        elif name == "sqrt_m_over_c":
            sched = bd.ChainSchedule.sqrt_m_over_c(gamma, C, m)
        elif name == "power_law":
            sched = bd.ChainSchedule.power_law(gamma, C, m, int(params["oracle"]["d_G"]))
        else:
            raise click.UsageError(f"unknown schedule {name!r}")
        if oracle_cfg["kind"] == "parametric":
            oracle = cap.DimOracle.parametric(oracle_cfg["K_G"], int(oracle_cfg["d_G"]), M=M_G)
        else:
            G = load_vector_class(oracle_cfg["model"])
            oracle = cap.DimOracle.measured(G.components)
        return bd.chained_rademacher_bound(sched, C, m, M_G, gamma, oracle)
    if which == "t7":
        return bd.parametric_rademacher_bound(int(params["d_G"]), params["K_G"],
                                              int(params["C"]), int(params["m"]),
                                              params["gamma"], params["M_G"])
    if which == "l1":
        G = load_vector_class(params["model"])
        sample = LabeledSample(tuple((int(x), int(y)) for x, y in params["sample"]),
                               n_points=G.ground.n, C=G.C)
        return bd.decomposition_rhs(G, sample, params["eps"], PNorm.parse(params["p"]))
    if which == "l2":
        p = PNorm.parse(params["p"])
        if p.is_inf:
            return bd.sauer_shelah_linf(params["eps"], params["M_F"], int(params["n"]),
                                        params["d"])
        return bd.sauer_shelah_lp(params["eps"], int(p.p), params["M_F"], params["d"])
    if which == "l3":
        return bd.packing_bound_l2(params["eps"], params["M_F"], params["d"])
    if which == "a1":
        F = load_tabulated_class(params["class"])
        pts = tuple(params.get("pts") or range(F.ground.n))
        if params.get("integral"):
            return bd.dudley_integral(F, pts)
        from .metric import P2, pairwise_distances

        diam = float(pairwise_distances(F, pts, P2).max())
        sched = bd.ChainSchedule.geometric_diam(diam, int(params.get("N", 3)))
        return bd.dudley_bound(F, pts, sched)
    if which == "a6":
        return bd.sauer_shelah_grid(params["eps"], int(params["p"]), params["M_F"],
                                    int(params["N"]), int(params["n"]), params["d"])
    raise click.UsageError(f"unknown bound id {which!r}")


@main.command()
@click.option("--which", required=True,
              type=click.Choice(["t2", "t4", "t5", "t6", "t7", "l1", "l2", "l3", "a1", "a6"]))
@click.option("--params", "params_file", required=True, type=click.Path(exists=True))
@click.option("--out", "out_file", type=click.Path(), default=None,
              help="Write the report JSON here instead of stdout.")
def bounds(which, params_file, out_file) -> None:
    """Evaluate one closed-form bound from a JSON params file."""
    report = _bound_from_params(which, _load_json(params_file))
    text = report.to_json()
    if out_file:
        Path(out_file).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


@main.command()
@click.option("--grid", "grid_file", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def sweep(grid_file, out_dir) -> None:
    """Tabulate bounds over a parameter grid into CSV (plus optional figures)."""
    manifest = run_sweep(load_grid(grid_file), out_dir)
    click.echo(f"wrote {len(manifest.outputs)} file(s) to {out_dir}")


@main.command()
@click.option("--model", "model_file", required=True, type=click.Path(exists=True))
@click.option("--dist", "dist_file", required=True, type=click.Path(exists=True))
@click.option("--m", required=True, type=int)
@click.option("--gamma", required=True, type=float)
@click.option("--delta", required=True, type=float)
@click.option("--trials", required=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--mc-trials", default=128, show_default=True, type=int)
def experiment(model_file, dist_file, m, gamma, delta, trials, seed, out_dir, mc_trials) -> None:
    """Measure empirical coverage of the risk bounds on simulated samples."""
    G = load_vector_class(model_file)
    P = load_distribution(dist_file, n_points=G.ground.n, C=G.C)
    manifest = run_experiment(G, P, m, gamma, delta, trials, seed, out_dir,
                              mc_trials=mc_trials)
    res = manifest.results
    click.echo(f"coverage sup-norm: {res['coverage_sup_norm']:.4f}  "
               f"l2: {res['coverage_l2']:.4f}  target: {res['target']}")


@main.command()
@click.option("--csv", "csv_file", required=True, type=click.Path(exists=True))
@click.option("--spec", "spec_file", required=True, type=click.Path(exists=True))
@click.option("--out", "out_file", required=True, type=click.Path())
def plot(csv_file, spec_file, out_file) -> None:
    """Render CSV columns to an SVG figure."""
    emit_plot(csv_file, _load_json(spec_file), out_file)
    click.echo(f"wrote {out_file}")


if __name__ == "__main__":
    try:
        main()
    except CapacityLabError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
