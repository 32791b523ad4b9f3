"""Coverage experiments: how often the high-probability risk bounds hold.

For a fixed finite vector class and known distribution, each trial draws an
m-sample, evaluates both risk bounds for every function, and records whether
the exact risk stayed below its bound uniformly over the class.  The bound on
the sup-norm route uses the exact ground-restricted uniform covering number;
the L2 route uses the per-sample Rademacher complexity, exact when the sample
is small enough and a flagged Monte Carlo fallback otherwise.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import bounds as bd
from .capacity import Caps, DEFAULT_CAPS, CapacityQuery, Enumerate, uniform_capacity
from .errors import InputValidationError, ResourceLimitError
from .fclass import VectorClass, margin_transform, margin_transform_full, squash
from .metric import PINF
from .plotting import emit_plot
from .rademacher import rademacher_exact, rademacher_mc
from .risk import (
    INDICATOR,
    TRUNCATED_HINGE,
    ZERO_ONE,
    DiscreteDistribution,
    MarginLoss,
    expected_risk,
    loss_eval_array,
)
from .runio import RunManifest, write_csv


def ground_restricted_covering(G: VectorClass, gamma: float, m: int, *,
                               caps: Caps = DEFAULT_CAPS) -> int:
    """Uniform proper covering of the squashed margin class at radius gamma/2.

    The sup norm over size-2m multisets is taken over the finite product
    domain (ground point, label), which is the whole domain here.
    """
    table = squash(margin_transform_full(G), gamma)
    q = CapacityQuery(eps=gamma / 2.0, p=PINF, mode="exact", measure="covering")
    return uniform_capacity(table, 2 * m, q, Enumerate(), caps=caps).value


def run_experiment(G: VectorClass, P: DiscreteDistribution, m: int, gamma: float,
                   delta: float, trials: int, seed: int, out_dir: str | Path | None = None,
                   *, mc_trials: int = 128, caps: Caps = DEFAULT_CAPS) -> RunManifest:
    """Simulate T m-samples and measure the coverage of both risk bounds."""
    if not 0 < gamma <= 1:
        raise InputValidationError("gamma must lie in (0, 1]")
    if not 0 < delta < 1:
        raise InputValidationError("delta must lie in (0, 1)")
    if m < 1 or trials < 1:
        raise InputValidationError("m and trials must be >= 1")
    if P.n_points != G.ground.n or P.C != G.C:
        raise InputValidationError("distribution and class shapes disagree")

    cov = ground_restricted_covering(G, gamma, m, caps=caps)
    sup_term = math.sqrt((2.0 / m) * (math.log(cov) + math.log(2.0 / delta))) + 1.0 / m
    conf_term = math.sqrt(math.log(1.0 / delta) / (2.0 * m))

    loss_ind = MarginLoss(INDICATOR, gamma)
    loss_hinge = MarginLoss(TRUNCATED_HINGE, gamma)
    zero_one = MarginLoss(ZERO_ONE)
    L_true = np.asarray([expected_risk(G, j, P, zero_one) for j in range(G.size)])

    rad_exact = m <= caps.rademacher_exact_max
    rows = []
    ok_sup = 0
    ok_l2 = 0
    for t in range(trials):
        rng = np.random.default_rng((seed, t, 0))
        sample = P.sample(rng, m)
        margins = margin_transform(G, sample)       # rows = functions, cols = entries
        L_ind = loss_eval_array(loss_ind, margins.values).mean(axis=1)
        L_hinge = loss_eval_array(loss_hinge, margins.values).mean(axis=1)
        squashed = squash(margins, gamma)
        cols = tuple(range(m))
        if rad_exact:
            rhat = rademacher_exact(squashed, cols, caps=caps).value
        else:
            rhat = rademacher_mc(squashed, cols, mc_trials, (seed, t, 1)).value
        rhs_sup = L_ind + sup_term
        rhs_l2 = L_hinge + 2.0 * rhat / gamma + conf_term
        margin_sup = float((rhs_sup - L_true).min())
        margin_l2 = float((rhs_l2 - L_true).min())
        sup_holds = margin_sup >= 0.0
        l2_holds = margin_l2 >= 0.0
        ok_sup += sup_holds
        ok_l2 += l2_holds
        rows.append((t, rhat, margin_sup, margin_l2, sup_holds, l2_holds))

    coverage_sup = ok_sup / trials
    coverage_l2 = ok_l2 / trials
    config = {
        "m": m, "gamma": gamma, "delta": delta, "trials": trials, "seed": seed,
        "mc_trials": mc_trials, "C": G.C, "class_size": G.size, "ground": G.ground.n,
    }
    manifest = RunManifest(kind="experiment", config=config, seed=seed)
    manifest.results = {
        "covering_number": cov,
        "rademacher_method": "exact" if rad_exact else f"mc({mc_trials})",
        "rademacher_fallback": not rad_exact,
        "coverage_sup_norm": coverage_sup,
        "coverage_l2": coverage_l2,
        "target": 1.0 - delta,
    }
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / "trials.csv"
        write_csv(
            csv_path,
            ("trial", "rademacher", "margin_sup_norm", "margin_l2", "holds_sup_norm", "holds_l2"),
            rows,
        )
        manifest.outputs.append(str(csv_path))
        svg_path = out_dir / "coverage.svg"
        emit_plot(
            csv_path,
            {"x": "trial", "y": ["margin_sup_norm", "margin_l2"], "kind": "scatter",
             "title": "slack of the uniform bound per trial", "xlabel": "trial",
             "ylabel": "min over class of bound - risk"},
            svg_path,
        )
        manifest.outputs.append(str(svg_path))
        manifest.write(out_dir)
    return manifest
