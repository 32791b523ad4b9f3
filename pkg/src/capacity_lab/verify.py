"""Brute-force verification suites: exact combinatorial left-hand sides
against closed-form right-hand sides, zero tolerance.

Every suite draws seeded random instances at desk scale, computes the exact
quantity with the combinatorial solvers, evaluates the bound it is supposed
to obey, and records any violation verbatim (value matrix, radius, norm) so
it can be replayed.  Resource-cap refusals count as skips, never failures.
"""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds as bd
from . import capacity as cap
from .errors import ResourceLimitError
from .fclass import (
    CodomainGrid,
    GroundSet,
    LabeledSample,
    TabulatedClass,
    discretize,
    eta_grid,
    joint_vector_class,
    margin_transform,
    product_vector_class,
    random_grid_class,
    random_uniform_class,
    squash,
    squash_value,
)
from .metric import P1, P2, PINF, PNorm, pairwise_distances
from .rademacher import massart_bound, rademacher_exact
from .risk import INDICATOR, TRUNCATED_HINGE, ZERO_ONE, MarginLoss, loss_eval
from .runio import RunManifest, parallel_map, write_csv

SUITE_IDS = {
    "kolmogorov": 1,
    "decomposition": 2,
    "discretize_packing": 3,
    "discretize_dim": 4,
    "combinatorial": 5,
    "master_lp": 6,
    "master_linf": 7,
    "master_l2": 8,
    "extraction": 9,
    "dudley": 10,
    "chained": 11,
    "kms": 12,
    "losses": 13,
    "massart": 14,
}

DEFAULT_COUNTS = {
    "kolmogorov": 200,
    "decomposition": 100,
    "discretize_packing": 200,
    "discretize_dim": 200,
    "combinatorial": 100,
    "master_lp": 200,
    "master_linf": 200,
    "master_l2": 200,
    "extraction": 8,
    "dudley": 50,
    "chained": 30,
    "kms": 30,
    "losses": 40,
    "massart": 50,
}


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    skips: int = 0
    elapsed_s: float = 0.0

    def fail(self, **payload) -> None:
        self.failures.append(payload)

    @property
    def ok(self) -> bool:
        return not self.failures


def _rng(seed: int, suite: str, i: int) -> np.random.Generator:
    return np.random.default_rng((seed, SUITE_IDS[suite], i))


def _random_class(rng: np.random.Generator, max_rows: int, max_n: int) -> TabulatedClass:
    """Half uniform-valued, half grid-valued classes (grids make exact ties)."""
    rows = int(rng.integers(1, max_rows + 1))
    n = int(rng.integers(1, max_n + 1))
    M = float(rng.choice([0.5, 1.0, 2.0]))
    if rng.random() < 0.5:
        return random_uniform_class(rows, n, M, rng.integers(0, 2**32))
    N = int(rng.integers(4, 9))
    grid = [2.0 * M * j / N - M for j in range(N + 1)]  # centered onto [-M, M]
    return random_grid_class(rows, n, grid, rng.integers(0, 2**32), M=M)


def _eps_values(rng: np.random.Generator, F: TabulatedClass, p: PNorm, count: int) -> list[float]:
    """Radii mixing uniform draws with exact observed distances (tie probes)."""
    D = pairwise_distances(F, tuple(range(F.ground.n)), p)
    pos = sorted({float(x) for x in D[np.triu_indices(D.shape[0], k=1)] if x > 0})
    out = []
    for k in range(count):
        if pos and k % 2 == 0:
            out.append(pos[int(rng.integers(0, len(pos)))])
        else:
            out.append(float(rng.uniform(1e-6, 2.0 * F.M)))
    return out


# ---------------------------------------------------------------------------
# suites


def suite_kolmogorov(seed: int, count: int, caps: cap.Caps, slack: float = 0.0) -> SuiteResult:
    """Proper covering <= packing, exact integers, every class / radius / norm.

    slack widens both threshold predicates symmetrically (the robustness
    knob); the inequality is preserved for any nonnegative slack.
    """
    res = SuiteResult("kolmogorov")
    t0 = time.perf_counter()
    for i in range(count):
        rng = _rng(seed, "kolmogorov", i)
        F = _random_class(rng, max_rows=12, max_n=6)
        pts = tuple(range(F.ground.n))
        for p in (P1, P2, PINF):
            for eps in _eps_values(rng, F, p, 5):
                try:
                    cov = cap.covering_number(F, pts, cap.CapacityQuery(eps=eps, p=p),
                                              caps=caps, slack=slack).value
                    pk = cap.packing_number(
                        F, pts, cap.CapacityQuery(eps=eps, p=p, measure="packing"),
                        caps=caps, slack=slack,
                    ).value
                except ResourceLimitError:
                    res.skips += 1
                    continue
                res.checks += 1
                if cov > pk:
                    res.fail(instance=i, eps=eps, p=str(p), covering=cov, packing=pk,
                             klass=F.to_json_dict(),
                             description="proper covering exceeded packing")
    res.elapsed_s = time.perf_counter() - t0
    return res


def _random_vector_instance(rng: np.random.Generator, caps: cap.Caps):
    C = int(rng.choice([3, 4]))
    max_rows = 4 if C == 3 else 3
    n = int(rng.integers(1, 5))
    M = 1.0
    factors = [
        random_uniform_class(int(rng.integers(1, max_rows + 1)), n, M, rng.integers(0, 2**32))
        for _ in range(C)
    ]
    G = product_vector_class(factors)
    m = int(rng.integers(1, 6))
    entries = tuple(
        (int(rng.integers(0, n)), int(rng.integers(1, C + 1))) for _ in range(m)
    )
    sample = LabeledSample(entries, n_points=n, C=C)
    gamma = float(rng.uniform(0.05, 1.0))
    return G, sample, gamma


def suite_decomposition(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Margin-class covering numbers against the per-component product."""
    res = SuiteResult("decomposition")
    t0 = time.perf_counter()
    solver_caps = dataclasses.replace(caps, exact_solver_max=max(300, caps.exact_solver_max))
    for i in range(count):
        rng = _rng(seed, "decomposition", i)
        G, sample, gamma = _random_vector_instance(rng, caps)
        FG = margin_transform(G, sample)
        FGg = squash(FG, gamma)
        cols = tuple(range(sample.m))
        eps = float(rng.uniform(1e-3, 2.0 * G.M))
        for p in (P1, P2, PINF):
            try:
                lhs_sq = cap.covering_number(FGg, cols, cap.CapacityQuery(eps=eps, p=p),
                                             caps=solver_caps).value
                lhs = cap.covering_number(FG, cols, cap.CapacityQuery(eps=eps, p=p),
                                          caps=solver_caps).value
                rhs = bd.decomposition_rhs(G, sample, eps, p, caps=solver_caps)
            except ResourceLimitError:
                res.skips += 1
                continue
            res.checks += 1
            if not (lhs_sq <= lhs <= rhs.value):
                res.fail(instance=i, eps=eps, p=str(p), gamma=gamma,
                         covering_squashed=lhs_sq, covering_margin=lhs, rhs=rhs.value,
                         klass=G.to_json_dict(), sample=list(sample.entries),
                         description="covering chain violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_discretize_packing(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Packing survives quantization: M(eps, F) <= M(((eps^p - eta^p)^(1/p))/2, F_eta)."""
    res = SuiteResult("discretize_packing")
    t0 = time.perf_counter()
    for i in range(count):
        rng = _rng(seed, "discretize_packing", i)
        F = _random_class(rng, max_rows=10, max_n=5)
        pts = tuple(range(F.ground.n))
        eps = float(rng.uniform(1e-3, 2.0 * F.M))
        eta = float(rng.uniform(1e-6, eps * (1 - 1e-9)))
        p = PNorm(int(rng.choice([1, 2, 3])))
        target = ((eps ** p.p - eta ** p.p) ** (1.0 / p.p)) / 2.0
        Fd = discretize(F, eta)
        try:
            lhs = cap.packing_number(F, pts, cap.CapacityQuery(eps=eps, p=p, measure="packing"),
                                     caps=caps).value
            rhs = cap.packing_number(Fd, pts, cap.CapacityQuery(eps=target, p=p, measure="packing"),
                                     caps=caps).value
        except ResourceLimitError:
            res.skips += 1
            continue
        res.checks += 1
        if lhs > rhs:
            res.fail(instance=i, eps=eps, eta=eta, p=str(p), lhs=lhs, rhs=rhs,
                     klass=F.to_json_dict(), description="discretized packing dropped")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_discretize_dim(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Dimension survives quantization: eps-dim(F_eta) <= (eps - eta/2)-dim(F)."""
    res = SuiteResult("discretize_dim")
    t0 = time.perf_counter()
    for i in range(count):
        rng = _rng(seed, "discretize_dim", i)
        F = _random_class(rng, max_rows=10, max_n=5)
        eps = float(rng.uniform(1e-3, F.M))
        eta = float(rng.uniform(1e-6, 2.0 * eps * (1 - 1e-9)))
        Fd = discretize(F, eta)
        left_witness = eta_grid(F.M, eta)
        shifted = tuple(b + eta / 2.0 - F.M for b in left_witness)
        right_margin = eps - eta / 2.0
        right_witness = tuple(sorted(set(
            cap.enriched_witness_values(F, right_margin) + shifted
        )))
        try:
            lhs = cap.fat_shattering_dim(Fd, eps, left_witness, caps=caps).dim
            rhs = cap.fat_shattering_dim(F, right_margin, right_witness, caps=caps).dim
        except ResourceLimitError:
            res.skips += 1
            continue
        res.checks += 1
        if lhs > rhs:
            res.fail(instance=i, eps=eps, eta=eta, lhs=lhs, rhs=rhs,
                     klass=F.to_json_dict(), description="discretized dimension grew")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_combinatorial(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Grid-codomain packing strictly below the combinatorial bound."""
    res = SuiteResult("combinatorial")
    t0 = time.perf_counter()
    for i in range(count):
        rng = _rng(seed, "combinatorial", i)
        N = int(rng.integers(4, 9))
        M = float(rng.choice([0.5, 1.0]))
        grid = CodomainGrid(M=M, N=N)
        rows = int(rng.integers(2, 13))
        n = int(rng.integers(1, 7))
        F = random_grid_class(rows, n, grid.values, rng.integers(0, 2**32), M=2.0 * M)
        pts = tuple(range(n))
        eps = float(rng.uniform(6.0 * M / N * (1 + 1e-9), 2.0 * M))
        margin = eps / 2.0 - 3.0 * M / N
        p = int(rng.choice([1, 2]))
        try:
            d = cap.fat_shattering_dim(F, margin, grid.values, caps=caps).dim
            if d < 1:
                res.skips += 1
                continue
            lhs = cap.packing_number(F, pts, cap.CapacityQuery(eps=eps, p=PNorm(p), measure="packing"),
                                     caps=caps).value
        except ResourceLimitError:
            res.skips += 1
            continue
        rhs = bd.sauer_shelah_grid(eps, p, M, N, n, d)
        res.checks += 1
        if not math.log(lhs) < rhs.ln_value():
            res.fail(instance=i, eps=eps, p=p, N=N, d=d, lhs=lhs, ln_rhs=rhs.ln_value(),
                     klass=F.to_json_dict(), description="grid packing bound violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


def _master_instances(seed: int, suite: str, count: int):
    for i in range(count):
        rng = _rng(seed, suite, i)
        F = _random_class(rng, max_rows=12, max_n=6)
        eps_list = _eps_values(rng, F, P2, 5)
        yield i, F, [e for e in eps_list if 0 < e <= 2.0 * F.M]


def suite_master_lp(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Finite-p packing against the dimension-free bound at dimension eps/45."""
    res = SuiteResult("master_lp")
    t0 = time.perf_counter()
    for i, F, eps_list in _master_instances(seed, "master_lp", count):
        pts = tuple(range(F.ground.n))
        for eps in eps_list:
            for p in (1, 2):
                try:
                    wit = cap.enriched_witness_values(F, eps / 45.0)
                    d = cap.fat_shattering_dim(F, eps / 45.0, wit, caps=caps).dim
                    lhs = cap.packing_number(
                        F, pts, cap.CapacityQuery(eps=eps, p=PNorm(p), measure="packing"),
                        caps=caps).value
                except ResourceLimitError:
                    res.skips += 1
                    continue
                rhs = bd.sauer_shelah_lp(eps, p, F.M, d)
                res.checks += 1
                if math.log(lhs) > rhs.ln_value():
                    res.fail(instance=i, eps=eps, p=p, d=d, lhs=lhs, ln_rhs=rhs.ln_value(),
                             klass=F.to_json_dict(), description="L_p master bound violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_master_linf(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Sup-norm packing against the n-dependent bound at dimension eps/4."""
    res = SuiteResult("master_linf")
    t0 = time.perf_counter()
    for i, F, eps_list in _master_instances(seed, "master_linf", count):
        pts = tuple(range(F.ground.n))
        for eps in eps_list:
            try:
                wit = cap.enriched_witness_values(F, eps / 4.0)
                d = cap.fat_shattering_dim(F, eps / 4.0, wit, caps=caps).dim
                lhs = cap.packing_number(
                    F, pts, cap.CapacityQuery(eps=eps, p=PINF, measure="packing"),
                    caps=caps).value
            except ResourceLimitError:
                res.skips += 1
                continue
            res.checks += 1
            if d < 1:
                if lhs > 1:  # two separated rows force a one-point shattering
                    res.fail(instance=i, eps=eps, d=d, lhs=lhs, klass=F.to_json_dict(),
                             description="packing > 1 with zero dimension at eps/4")
                continue
            rhs = bd.sauer_shelah_linf(eps, F.M, F.ground.n, d)
            if math.log(lhs) > rhs.ln_value():
                res.fail(instance=i, eps=eps, d=d, lhs=lhs, ln_rhs=rhs.ln_value(),
                         klass=F.to_json_dict(), description="sup-norm master bound violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_master_l2(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """L2 packing against the bound at dimension eps/96."""
    res = SuiteResult("master_l2")
    t0 = time.perf_counter()
    for i, F, eps_list in _master_instances(seed, "master_l2", count):
        pts = tuple(range(F.ground.n))
        for eps in eps_list:
            try:
                wit = cap.enriched_witness_values(F, eps / 96.0)
                d = cap.fat_shattering_dim(F, eps / 96.0, wit, caps=caps).dim
                lhs = cap.packing_number(
                    F, pts, cap.CapacityQuery(eps=eps, p=P2, measure="packing"),
                    caps=caps).value
            except ResourceLimitError:
                res.skips += 1
                continue
            rhs = bd.packing_bound_l2(eps, F.M, d)
            res.checks += 1
            if math.log(lhs) > rhs.ln_value():
                res.fail(instance=i, eps=eps, d=d, lhs=lhs, ln_rhs=rhs.ln_value(),
                         klass=F.to_json_dict(), description="L2 master bound violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_extraction(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Subvector extraction on constructed instances, both present and absent."""
    res = SuiteResult("extraction")
    t0 = time.perf_counter()
    # shared-coordinate instance: distance 1 concentrated identically everywhere
    for i in range(count):
        rng = _rng(seed, "extraction", i)
        n = int(rng.integers(1, 5))
        rows = int(rng.integers(2, 5))
        base = np.arange(rows, dtype=np.float64)[:, None] * np.ones((1, n))
        F = TabulatedClass(M=float(rows), ground=GroundSet(n), values=base)
        p = int(rng.choice([1, 2]))
        found = cap.extraction_search(F, tuple(range(n)), 1.0, p, 1, caps=caps)
        res.checks += 1
        if found is None or len(found) != 1:
            res.fail(instance=i, p=p, description="one-point subvector not found",
                     klass=F.to_json_dict())
    # absent instance: three functions, each point kills one pair at target level
    F3 = TabulatedClass(M=2.0, ground=GroundSet(2),
                        values=[[0.0, 0.0], [0.1, 1.95], [1.95, 0.1]])
    res.checks += 1
    if cap.extraction_search(F3, (0, 1), 1.0, 1, 1, caps=caps) is not None:
        res.fail(description="expected no qualifying one-point subvector",
                 klass=F3.to_json_dict())
    # the cardinality precondition indeed fails there
    res.checks += 1
    if 3 <= math.exp(cap.extraction_constant(1, F3.M) * 1 * 1.0**2):
        res.fail(description="constructed instance unexpectedly satisfies the size condition")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_dudley(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Exact Rademacher average below both chaining forms."""
    res = SuiteResult("dudley")
    t0 = time.perf_counter()
    for i in range(count):
        rng = _rng(seed, "dudley", i)
        F = _random_class(rng, max_rows=12, max_n=12)
        pts = tuple(range(F.ground.n))
        try:
            rhat = rademacher_exact(F, pts, caps=caps).value
        except ResourceLimitError:
            res.skips += 1
            continue
        D = pairwise_distances(F, pts, P2)
        diam = float(D.max())
        if diam == 0.0:
            res.checks += 1
            if rhat > 1e-12:
                res.fail(instance=i, rhat=rhat, description="degenerate class with nonzero average")
            continue
        for N in range(1, 6):
            sched = bd.ChainSchedule.geometric_diam(diam, N)
            try:
                val = bd.dudley_bound(F, pts, sched, caps=caps).value
            except ResourceLimitError:
                res.skips += 1
                continue
            res.checks += 1
            if rhat > val:
                res.fail(instance=i, N=N, rhat=rhat, bound=val, klass=F.to_json_dict(),
                         description="chained entropy bound violated")
        try:
            integ = bd.dudley_integral(F, pts, caps=caps).value
        except ResourceLimitError:
            res.skips += 1
            continue
        res.checks += 1
        if rhat > integ:
            res.fail(instance=i, rhat=rhat, bound=integ, klass=F.to_json_dict(),
                     description="entropy integral bound violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


def _small_vector_instance(rng: np.random.Generator):
    C = int(rng.choice([3, 4]))
    n = int(rng.integers(1, 5))
    rows = int(rng.integers(1, 5))
    comps = [random_uniform_class(rows, n, 1.0, rng.integers(0, 2**32)) for _ in range(C)]
    from .fclass import joint_vector_class

    G = joint_vector_class(comps)
    m = int(rng.integers(2, 7))
    entries = tuple((int(rng.integers(0, n)), int(rng.integers(1, C + 1))) for _ in range(m))
    sample = LabeledSample(entries, n_points=n, C=C)
    gamma = float(rng.uniform(0.05, 1.0))
    return G, sample, gamma


def suite_chained(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Per-dataset Rademacher of the squashed margin class below the chained bound."""
    res = SuiteResult("chained")
    t0 = time.perf_counter()
    for i in range(count):
        rng = _rng(seed, "chained", i)
        G, sample, gamma = _small_vector_instance(rng)
        FGg = squash(margin_transform(G, sample), gamma)
        cols = tuple(range(sample.m))
        oracle = cap.DimOracle.measured(G.components, caps=caps)
        N = int(rng.integers(1, 4))
        sched = bd.ChainSchedule.geometric_cgamma(G.C, gamma, N)
        try:
            rhat = rademacher_exact(FGg, cols, caps=caps).value
            val = bd.chained_rademacher_bound(sched, G.C, sample.m, G.M, gamma, oracle).value
        except ResourceLimitError:
            res.skips += 1
            continue
        res.checks += 1
        if rhat > val:
            res.fail(instance=i, gamma=gamma, N=N, rhat=rhat, bound=val,
                     klass=G.to_json_dict(), sample=list(sample.entries),
                     description="chained multiclass bound violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_kms(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Per-dataset Rademacher of the squashed margin class below C x union complexity."""
    res = SuiteResult("kms")
    t0 = time.perf_counter()
    for i in range(count):
        rng = _rng(seed, "kms", i)
        G, sample, gamma = _small_vector_instance(rng)
        FGg = squash(margin_transform(G, sample), gamma)
        cols = tuple(range(sample.m))
        try:
            rhat = rademacher_exact(FGg, cols, caps=caps).value
            rhs = bd.rademacher_union_rhs(G.components, sample.points, "exact", caps=caps).value
        except ResourceLimitError:
            res.skips += 1
            continue
        res.checks += 1
        if rhat > rhs:
            res.fail(instance=i, gamma=gamma, rhat=rhat, rhs=rhs,
                     klass=G.to_json_dict(), sample=list(sample.entries),
                     description="union complexity bound violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_losses(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Margin-loss axioms, dominance, and invariance under squashing."""
    res = SuiteResult("losses")
    t0 = time.perf_counter()
    for i in range(count):
        rng = _rng(seed, "losses", i)
        gamma = float(rng.uniform(0.05, 1.0))
        gamma2 = float(rng.uniform(gamma, 1.0))
        for kind in (INDICATOR, TRUNCATED_HINGE):
            loss = MarginLoss(kind, gamma)
            res.checks += 1
            bad = []
            if loss_eval(loss, 0.0) != 1.0 or loss_eval(loss, gamma) != 0.0:
                bad.append("endpoint values")
            ts = np.concatenate([rng.uniform(-2, 2, size=25), [0.0, gamma]])
            vals = [loss_eval(loss, float(t)) for t in ts]
            if any(not 0.0 <= v <= 1.0 for v in vals):
                bad.append("range")
            order = np.argsort(ts)
            sv = [vals[k] for k in order]
            if any(b > a + 1e-12 for a, b in zip(sv, sv[1:])):
                bad.append("monotone")
            if any(loss_eval(MarginLoss(ZERO_ONE), float(t)) > v for t, v in zip(ts, vals)):
                bad.append("dominance")
            if gamma < gamma2:
                big = MarginLoss(kind, gamma2)
                for t in rng.uniform(1e-9, gamma * (1 - 1e-9), size=10):
                    if loss_eval(loss, float(t)) > loss_eval(big, float(t)) + 1e-12:
                        bad.append("gamma monotonicity")
                        break
            for t in ts:  # loss of squashed value equals loss of raw value
                if loss_eval(loss, squash_value(float(t), gamma)) != loss_eval(loss, float(t)):
                    bad.append("squash invariance")
                    break
            if bad:
                res.fail(instance=i, kind=kind, gamma=gamma, problems=bad,
                         description="margin loss property violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


def suite_massart(seed: int, count: int, caps: cap.Caps) -> SuiteResult:
    """Finite-class maximal inequality dominates the exact Rademacher average."""
    res = SuiteResult("massart")
    t0 = time.perf_counter()
    for i in range(count):
        rng = _rng(seed, "massart", i)
        F = _random_class(rng, max_rows=10, max_n=8)
        pts = tuple(range(F.ground.n))
        try:
            rhat = rademacher_exact(F, pts, caps=caps).value
        except ResourceLimitError:
            res.skips += 1
            continue
        bound = massart_bound([tuple(map(float, r)) for r in F.values])
        res.checks += 1
        if rhat > bound:
            res.fail(instance=i, rhat=rhat, bound=bound, klass=F.to_json_dict(),
                     description="maximal inequality violated")
    res.elapsed_s = time.perf_counter() - t0
    return res


SUITES = {
    "kolmogorov": suite_kolmogorov,
    "decomposition": suite_decomposition,
    "discretize_packing": suite_discretize_packing,
    "discretize_dim": suite_discretize_dim,
    "combinatorial": suite_combinatorial,
    "master_lp": suite_master_lp,
    "master_linf": suite_master_linf,
    "master_l2": suite_master_l2,
    "extraction": suite_extraction,
    "dudley": suite_dudley,
    "chained": suite_chained,
    "kms": suite_kms,
    "losses": suite_losses,
    "massart": suite_massart,
}


def run_verify(config: dict, out_dir: str | Path | None = None) -> RunManifest:
    """Run the selected suites; exit code 1 iff any inequality check failed.

    Config keys: seed (required), suites (list, default all), counts (per-suite
    overrides), caps (Caps field overrides), slack (threshold widening, the
    tolerance override knob, default 0).  Cap refusals are skips.  On failure
    the counterexample payload lands both in the manifest and in a replayable
    JSON file under out_dir/counterexamples.  Suites run concurrently up to
    CAPACITY_LAB_THREADS workers; reporting order is fixed regardless.
    """
    seed = int(config["seed"])
    names = list(config.get("suites") or SUITES)
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    counts = {**DEFAULT_COUNTS, **(config.get("counts") or {})}
    caps = cap.Caps.from_dict(config.get("caps"))
    slack = float(config.get("slack", 0.0))
    manifest = RunManifest(kind="verify", config=dict(config), seed=seed)

    def run_one(name: str) -> SuiteResult:
        if name == "kolmogorov":
            return SUITES[name](seed, int(counts[name]), caps, slack=slack)
        return SUITES[name](seed, int(counts[name]), caps)

    rows = []
    for name, result in zip(names, parallel_map(run_one, names)):
        manifest.results[name] = {
            "checks": result.checks,
            "failed": len(result.failures),
            "failures": result.failures,
            "skips": result.skips,
            "elapsed_s": result.elapsed_s,
        }
        rows.append((name, result.checks, len(result.failures), result.skips))
        if result.failures:
            manifest.exit_code = 1
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / "verify_results.csv"
        write_csv(csv_path, ("suite", "checks", "failed", "skips"), rows)
        manifest.outputs.append(str(csv_path))
        cx_dir = out_dir / "counterexamples"
        for name in names:
            for k, failure in enumerate(manifest.results[name]["failures"]):
                cx_dir.mkdir(parents=True, exist_ok=True)
                path = cx_dir / f"{name}_{k}.json"
                from .runio import atomic_write_json

                atomic_write_json(path, failure)
                manifest.outputs.append(str(path))
        manifest.write(out_dir)
    return manifest
