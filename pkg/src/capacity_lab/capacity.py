"""Exact and greedy capacity measures of finite tabulated classes.

Packing numbers are maximum cliques of the "distance >= eps" graph, proper
covering numbers are minimum dominating sets of the "distance < eps" graph
(solved as exact set cover), fat-shattering dimensions come from an
exhaustive subset-and-witness search, and the uniform variants take the
supremum over point multisets.  Exactness is the point: these quantities are
the left-hand sides that the closed-form bounds are checked against.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Literal, NamedTuple, Sequence

import numpy as np

from .errors import InputValidationError, PreconditionError, ResourceLimitError
from .fclass import TabulatedClass
from .metric import PNorm, pairwise_distances


@dataclass(frozen=True)
class Caps:
    """Size caps guarding the exact searches."""

    exact_solver_max: int = 64          # vertices for clique / set cover
    fatdim_max_points: int = 14
    fatdim_max_rows: int = 256
    multiset_enum_max: int = 20_000     # multisets for the uniform sup
    rademacher_exact_max: int = 20      # points, i.e. 2^20 sign vectors
    extraction_enum_max: int = 200_000  # subvectors tried by the extraction search

    @classmethod
    def from_dict(cls, d: dict | None) -> "Caps":
        if not d:
            return cls()
        known = {f for f in cls.__dataclass_fields__}
        bad = set(d) - known
        if bad:
            raise InputValidationError(f"unknown cap names: {sorted(bad)}")
        return cls(**{k: int(v) for k, v in d.items()})


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class CapacityQuery:
    """What to measure: radius, norm, solver mode and covering flavor."""

    eps: float
    p: PNorm
    mode: Literal["exact", "greedy"] = "exact"
    measure: Literal["covering", "packing"] = "covering"
    ambient: TabulatedClass | None = None  # centers source for non-proper covering

    def __post_init__(self):
        if not (isinstance(self.eps, (int, float)) and self.eps > 0):
            raise InputValidationError(f"eps must be positive, got {self.eps!r}")
        if self.mode not in ("exact", "greedy"):
            raise InputValidationError(f"mode must be 'exact' or 'greedy', got {self.mode!r}")
        if self.measure not in ("covering", "packing"):
            raise InputValidationError(f"measure must be 'covering' or 'packing', got {self.measure!r}")


class CapacityResult(NamedTuple):
    value: int
    exact: bool


def _distinct_restriction(F: TabulatedClass, pts: Sequence[int]) -> np.ndarray:
    """Rows restricted to pts with exact duplicates dropped (first occurrence order).

    Duplicates never change covering or packing numbers: a duplicate sits at
    distance zero from its representative.
    """
    V = F.values[:, tuple(int(p) for p in pts)]
    seen = set()
    keep = []
    for j in range(V.shape[0]):
        key = V[j].tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(j)
    return V[keep]


def _pairwise(V: np.ndarray, p: PNorm) -> np.ndarray:
    R = V.shape[0]
    out = np.zeros((R, R), dtype=np.float64)
    if p.is_inf:
        for i in range(R):
            out[i] = np.abs(V - V[i]).max(axis=1)
    else:
        q = int(p.p)
        for i in range(R):
            out[i] = (np.abs(V - V[i]) ** q).mean(axis=1) ** (1.0 / q)
    out = np.minimum(out, out.T)
    np.fill_diagonal(out, 0.0)
    return out


def _separated(d: float, eps: float, slack: float) -> bool:
    """Separation predicate of the packing graph: distance >= eps (minus slack)."""
    return d >= eps - slack


def _covers(d: float, eps: float, slack: float) -> bool:
    """Coverage predicate of the covering graph: distance < eps (plus slack)."""
    return d < eps + slack


# ---------------------------------------------------------------------------
# maximum clique (branch and bound with greedy coloring upper bounds)


def _max_clique(adj: list[int], n: int) -> tuple[int, list[int]]:
    if n == 0:
        return 0, []
    best = 0
    best_set: list[int] = []

    def color_order(cand: int) -> tuple[list[int], list[int]]:
        # Greedy coloring; vertices reported color class by color class, so the
        # color index is an upper bound on the clique size within the prefix.
        order: list[int] = []
        bounds: list[int] = []
        mask = cand
        color = 0
        while mask:
            color += 1
            avail = mask
            while avail:
                v = (avail & -avail).bit_length() - 1
                order.append(v)
                bounds.append(color)
                avail &= ~adj[v]
                avail &= ~(1 << v)
                mask &= ~(1 << v)
        return order, bounds

    def expand(cand: int, size: int, current: list[int]) -> None:
        nonlocal best, best_set
        order, bounds = color_order(cand)
        for idx in range(len(order) - 1, -1, -1):
            if size + bounds[idx] <= best:
                return
            v = order[idx]
            current.append(v)
            sub = cand & adj[v]
            if sub:
                expand(sub, size + 1, current)
            elif size + 1 > best:
                best = size + 1
                best_set = sorted(current)
            current.pop()
            cand &= ~(1 << v)

    expand((1 << n) - 1, 0, [])
    return best, best_set


def _greedy_packing(D: np.ndarray, eps: float, slack: float) -> list[int]:
    """Farthest-point insertion; returns a maximal separated set (ties by index)."""
    R = D.shape[0]
    chosen = [0]
    mind = D[0].copy()
    while True:
        best_v, best_d = -1, -math.inf
        for v in range(R):
            if v in chosen:
                continue
            if mind[v] > best_d:
                best_v, best_d = v, mind[v]
        if best_v < 0 or not _separated(best_d, eps, slack):
            break
        chosen.append(best_v)
        np.minimum(mind, D[best_v], out=mind)
    return sorted(chosen)


def packing_number(F: TabulatedClass, pts: Sequence[int], q: CapacityQuery, *,
                   caps: Caps = DEFAULT_CAPS, slack: float = 0.0) -> CapacityResult:
    """Largest cardinality of a subset with all pairwise distances >= eps."""
    V = _distinct_restriction(F, pts)
    D = _pairwise(V, q.p)
    R = D.shape[0]
    if q.mode == "greedy":
        return CapacityResult(len(_greedy_packing(D, q.eps, slack)), exact=False)
    if R > caps.exact_solver_max:
        raise ResourceLimitError(
            f"exact packing refused for {R} distinct rows (cap {caps.exact_solver_max}); use GREEDY"
        )
    adj = [0] * R
    for i in range(R):
        for j in range(i + 1, R):
            if _separated(float(D[i, j]), q.eps, slack):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    size, _ = _max_clique(adj, R)
    return CapacityResult(size, exact=True)


# ---------------------------------------------------------------------------
# minimum covering (exact set cover / greedy)


def _greedy_cover(universe: int, sets: list[int]) -> list[int]:
    chosen: list[int] = []
    uncovered = universe
    while uncovered:
        best_i, best_gain = -1, 0
        for i, s in enumerate(sets):
            gain = (s & uncovered).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        if best_i < 0:
            return []  # uncoverable
        chosen.append(best_i)
        uncovered &= ~sets[best_i]
    return chosen


def _min_set_cover(universe: int, sets: list[int]) -> list[int] | None:
    """Exact minimum set cover by branch and bound.

    Branches on the uncovered element with the fewest candidate sets,
    candidates ordered by coverage (ties by index), with a counting lower
    bound and dominance pruning on previously reached uncovered states.
    """
    greedy = _greedy_cover(universe, sets)
    if universe and not greedy:
        return None
    best: list[int] | None = greedy
    covered_by: dict[int, list[int]] = {}
    u = universe
    while u:
        e = (u & -u).bit_length() - 1
        covered_by[e] = [i for i, s in enumerate(sets) if (s >> e) & 1]
        if not covered_by[e]:
            return None
        u &= u - 1
    seen_depth: dict[int, int] = {}

    def bound(uncovered: int) -> int:
        biggest = 0
        for s in sets:
            c = (s & uncovered).bit_count()
            if c > biggest:
                biggest = c
        return math.inf if biggest == 0 else -(-uncovered.bit_count() // biggest)

    def dfs(uncovered: int, chosen: list[int]) -> None:
        nonlocal best
        if not uncovered:
            if best is None or len(chosen) < len(best):
                best = list(chosen)
            return
        prev = seen_depth.get(uncovered)
        if prev is not None and prev <= len(chosen):
            return
        seen_depth[uncovered] = len(chosen)
        if best is not None and len(chosen) + bound(uncovered) >= len(best):
            return
        # pick the most constrained uncovered element (lowest index on ties)
        pick, pick_count = -1, math.inf
        u = uncovered
        while u:
            e = (u & -u).bit_length() - 1
            c = len(covered_by[e])
            if c < pick_count:
                pick, pick_count = e, c
            u &= u - 1
        cands = sorted(covered_by[pick], key=lambda i: (-(sets[i] & uncovered).bit_count(), i))
        for i in cands:
            chosen.append(i)
            dfs(uncovered & ~sets[i], chosen)
            chosen.pop()

    dfs(universe, [])
    return best


def covering_number(F: TabulatedClass, pts: Sequence[int], q: CapacityQuery, *,
                    caps: Caps = DEFAULT_CAPS, slack: float = 0.0) -> CapacityResult:
    """Smallest number of centers whose open eps-balls cover every row.

    By default the cover is proper (centers are rows of F, so a finite cover
    always exists).  Supplying q.ambient draws centers from the ambient class
    instead; it must share the ground set, and an uncoverable instance raises
    PreconditionError.
    """
    pts = tuple(int(p) for p in pts)
    V = _distinct_restriction(F, pts)
    R = V.shape[0]
    if q.ambient is None:
        centers = V
    else:
        if q.ambient.ground.n != F.ground.n:
            raise InputValidationError("ambient class lives on a different ground set")
        centers = _distinct_restriction(q.ambient, pts)
    K = centers.shape[0]
    if max(R, K) > caps.exact_solver_max and q.mode == "exact":
        raise ResourceLimitError(
            f"exact covering refused for {R} rows / {K} centers (cap {caps.exact_solver_max}); use GREEDY"
        )
    # coverage bitmask per center
    sets = []
    qp = q.p
    for c in range(K):
        if qp.is_inf:
            dc = np.abs(V - centers[c]).max(axis=1)
        else:
            e = int(qp.p)
            dc = (np.abs(V - centers[c]) ** e).mean(axis=1) ** (1.0 / e)
        mask = 0
        for r in range(R):
            if _covers(float(dc[r]), q.eps, slack):
                mask |= 1 << r
        sets.append(mask)
    universe = (1 << R) - 1
    if q.mode == "greedy":
        chosen = _greedy_cover(universe, sets)
        if universe and not chosen:
            raise PreconditionError("no finite cover exists with the supplied centers")
        return CapacityResult(len(chosen), exact=False)
    cover = _min_set_cover(universe, sets)
    if cover is None:
        raise PreconditionError("no finite cover exists with the supplied centers")
    return CapacityResult(len(cover), exact=True)


# ---------------------------------------------------------------------------
# uniform (sup over point multisets) capacity


@dataclass(frozen=True)
class Enumerate:
    pass


@dataclass(frozen=True)
class Sample:
    k: int
    seed: int = 0


def _measure(F: TabulatedClass, pts: Sequence[int], q: CapacityQuery, caps: Caps) -> int:
    if q.measure == "packing":
        return packing_number(F, pts, q, caps=caps).value
    return covering_number(F, pts, q, caps=caps).value


def uniform_capacity(F: TabulatedClass, n: int, q: CapacityQuery,
                     strategy: Enumerate | Sample = Enumerate(), *,
                     caps: Caps = DEFAULT_CAPS) -> CapacityResult:
    """Sup of the requested measure over all size-n point multisets.

    Enumerate is exact.  For the sup norm only the support of a multiset
    matters and both measures grow with the support, so the enumeration
    shrinks to supports of size min(n, ground size).  Sample(k, seed) takes
    the max over k random multisets and is only a lower bound for the sup.
    """
    if n < 1:
        raise InputValidationError("n must be >= 1")
    npts = F.ground.n
    if isinstance(strategy, Sample):
        rng = np.random.default_rng((strategy.seed,))
        best = 0
        for _ in range(strategy.k):
            pts = tuple(int(x) for x in rng.integers(0, npts, size=n))
            best = max(best, _measure(F, pts, q, caps))
        return CapacityResult(best, exact=False)
    if q.p.is_inf:
        if n >= npts:
            return CapacityResult(_measure(F, tuple(range(npts)), q, caps), exact=True)
        count = math.comb(npts, n)
        if count > caps.multiset_enum_max:
            raise ResourceLimitError(
                f"{count} supports exceed the enumeration cap {caps.multiset_enum_max}"
            )
        best = 0
        for pts in itertools.combinations(range(npts), n):
            best = max(best, _measure(F, pts, q, caps))
        return CapacityResult(best, exact=True)
    count = math.comb(npts + n - 1, n)
    if count > caps.multiset_enum_max:
        raise ResourceLimitError(
            f"{count} multisets exceed the enumeration cap {caps.multiset_enum_max}"
        )
    best = 0
    for pts in itertools.combinations_with_replacement(range(npts), n):
        best = max(best, _measure(F, pts, q, caps))
    return CapacityResult(best, exact=True)


# ---------------------------------------------------------------------------
# fat-shattering dimension


@dataclass(frozen=True)
class ShatterCertificate:
    """A replayable witness for a gamma-shattering.

    realizers maps each sign pattern (tuple of +1/-1 per point) to the row
    index of a function achieving it at margin gamma around the witnesses.
    """

    points: tuple[int, ...]
    witnesses: tuple[float, ...]
    gamma: float
    realizers: dict[tuple[int, ...], int]

    def replay(self, F: TabulatedClass) -> bool:
        for pattern, row in self.realizers.items():
            for t, sign in enumerate(pattern):
                val = float(F.values[row, self.points[t]])
                if sign * (val - self.witnesses[t]) < self.gamma:
                    return False
        return True


@dataclass(frozen=True)
class FatShatteringResult:
    dim: int
    certificate: ShatterCertificate | None
    witness_values: tuple[float, ...]


def default_witness_values(F: TabulatedClass, gamma: float) -> tuple[float, ...]:
    """Finite default witness grid: {v - gamma, v + gamma} clipped to [-M, M].

    v ranges over the values appearing in the class.  The grid is recorded in
    every result; completeness against a continuous witness range is not
    claimed.
    """
    vals = np.unique(F.values)
    cands = set()
    for v in vals:
        for w in (float(v) - gamma, float(v) + gamma):
            if -F.M <= w <= F.M:
                cands.add(w)
    return tuple(sorted(cands))


def enriched_witness_values(F: TabulatedClass, gamma: float) -> tuple[float, ...]:
    """Default grid plus all value midpoints.

    Boundary witnesses v - gamma sit exactly on the margin and can lose a
    shattering to rounding; the midpoint between two values realizes any
    one-point separation with a factor-two margin, immune to float dust.
    """
    vals = [float(v) for v in np.unique(F.values)]
    cands = set(default_witness_values(F, gamma))
    for i, u in enumerate(vals):
        for v in vals[i + 1:]:
            w = (u + v) / 2.0
            if -F.M <= w <= F.M:
                cands.add(w)
    return tuple(sorted(cands))


def _point_configs(col: np.ndarray, witnesses: np.ndarray, gamma: float):
    """Distinct (witness, plus-mask, minus-mask) triples for one point.

    plus-mask collects rows with value - w >= gamma, minus-mask rows with
    w - value >= gamma.  Witnesses leaving either side empty cannot take part
    in any shattering and are dropped; witnesses inducing the same pair of
    masks collapse to the first (smallest) one.
    """
    plus = (col[None, :] - witnesses[:, None]) >= gamma   # (W, R)
    minus = (witnesses[:, None] - col[None, :]) >= gamma
    usable = np.flatnonzero(plus.any(axis=1) & minus.any(axis=1))
    if usable.size == 0:
        return []
    stacked = np.concatenate([plus[usable], minus[usable]], axis=1)
    _, first = np.unique(stacked, axis=0, return_index=True)
    R = col.shape[0]
    out = []
    for k in sorted(first):  # witnesses ascending, one per distinct mask pair
        w = usable[k]
        pm = 0
        mm = 0
        for r in range(R):
            if plus[w, r]:
                pm |= 1 << r
            if minus[w, r]:
                mm |= 1 << r
        out.append((float(witnesses[w]), pm, mm))
    return out


def _try_shatter(cfg_lists) -> tuple[tuple[float, ...], list[int]] | None:
    """Search one witness choice per point realizing all sign patterns.

    Returns (witnesses, per-pattern masks) on success.  Pattern index j uses
    sign +1 on point t when bit (q-1-t) of j is zero.
    """

    def rec(t: int, masks: list[int], wit: tuple[float, ...]):
        if t == len(cfg_lists):
            return wit, masks
        for w, plus, minus in cfg_lists[t]:
            new_masks = []
            ok = True
            for m in masks:
                mp = m & plus
                mm = m & minus
                if not mp or not mm:
                    ok = False
                    break
                new_masks.append(mp)
                new_masks.append(mm)
            if ok:
                found = rec(t + 1, new_masks, wit + (w,))
                if found is not None:
                    return found
        return None

    return rec(0, [~0], ())


def fat_shattering_dim(F: TabulatedClass, gamma: float,
                       witness_set: Sequence[float] | None = None, *,
                       caps: Caps = DEFAULT_CAPS) -> FatShatteringResult:
    """Exact fat-shattering dimension at margin gamma over a declared witness set.

    A subset is shattered when one witness per point realizes every sign
    pattern with margin gamma.  The search is exhaustive over subsets in
    increasing size (only extending subsets already shattered) and over the
    deduplicated witness configurations per point.  The empty set does not
    count: dimension >= 1 requires a one-point shattering.
    """
    if not (isinstance(gamma, (int, float)) and gamma > 0):
        raise InputValidationError(f"gamma must be positive, got {gamma!r}")
    if F.ground.n > caps.fatdim_max_points:
        raise ResourceLimitError(
            f"{F.ground.n} points exceed the fat-shattering cap {caps.fatdim_max_points}"
        )
    if F.size > caps.fatdim_max_rows:
        raise ResourceLimitError(
            f"{F.size} rows exceed the fat-shattering cap {caps.fatdim_max_rows}"
        )
    if witness_set is None:
        witness = default_witness_values(F, gamma)
    else:
        witness = tuple(sorted({float(w) for w in witness_set}))
        if not witness:
            raise InputValidationError("witness set must be nonempty")

    # dedupe rows; duplicate functions cannot add patterns
    seen = set()
    keep = []
    for j in range(F.size):
        key = F.values[j].tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(j)
    V = F.values[keep]
    R = V.shape[0]

    warr = np.asarray(witness, dtype=np.float64)
    configs = {i: _point_configs(V[:, i], warr, gamma) for i in range(F.ground.n)}
    feasible = [i for i in range(F.ground.n) if configs[i]]

    # patterns differing anywhere need rows with distinct restricted values,
    # so a q-point shattering requires at least 2^q distinct rows
    max_q = min(len(feasible), int(math.floor(math.log2(R))) if R >= 2 else 0)

    best_q = 0
    best_cert: ShatterCertificate | None = None
    frontier: list[tuple[int, ...]] = [(i,) for i in feasible]
    q = 1
    while q <= max_q and frontier:
        shattered_here: list[tuple[int, ...]] = []
        for subset in frontier:
            found = _try_shatter([configs[i] for i in subset])
            if found is None:
                continue
            shattered_here.append(subset)
            if q > best_q:
                wit, masks = found
                realizers = {}
                for jdx, m in enumerate(masks):
                    pattern = tuple(
                        +1 if ((jdx >> (q - 1 - t)) & 1) == 0 else -1 for t in range(q)
                    )
                    realizers[pattern] = keep[(m & -m).bit_length() - 1]
                best_q = q
                best_cert = ShatterCertificate(
                    points=subset, witnesses=wit, gamma=float(gamma), realizers=realizers
                )
        if not shattered_here:
            break
        prev = set(shattered_here)
        frontier = []
        for subset in shattered_here:
            for nxt in feasible:
                if nxt <= subset[-1]:
                    continue
                cand = subset + (nxt,)
                if all(tuple(c for c in cand if c != skip) in prev for skip in cand):
                    frontier.append(cand)
        q += 1
    return FatShatteringResult(dim=best_q, certificate=best_cert, witness_values=witness)


# ---------------------------------------------------------------------------
# subvector extraction search


def extraction_constant(p: int, M: float) -> float:
    """The separation-preserving sampling constant 3 / (112 (2M)^(2p))."""
    if not (isinstance(p, int) and p >= 1):
        raise InputValidationError(f"p must be a finite integer >= 1, got {p!r}")
    return 3.0 / (112.0 * (2.0 * M) ** (2 * p))


def extraction_search(F: TabulatedClass, pts: Sequence[int], eps: float, p: int,
                      r: float, *, caps: Caps = DEFAULT_CAPS) -> tuple[int, ...] | None:
    """Smallest subvector of pts (size <= r) keeping F (1/2)^((p+1)/p) eps separated.

    The class must be eps-separated over pts to begin with; this is verified
    and violated inputs raise PreconditionError.  Absence of a qualifying
    subvector is a legal outcome (returns None), expected whenever the
    cardinality condition |F| <= exp(K_e(p) r eps^(2p)) fails.
    """
    pts = tuple(int(x) for x in pts)
    if not (isinstance(p, int) and p >= 1):
        raise InputValidationError(f"p must be a finite integer >= 1, got {p!r}")
    if not 1 <= r <= len(pts):
        raise InputValidationError(f"r must lie in [1, {len(pts)}], got {r!r}")
    pn = PNorm(p)
    D = _pairwise(F.values[:, pts], pn)
    R = D.shape[0]
    off = D[np.triu_indices(R, k=1)]
    if off.size and float(off.min()) < eps:
        raise PreconditionError(
            f"class is not {eps}-separated over the supplied points (min distance {float(off.min())})"
        )
    target = (0.5 ** ((p + 1) / p)) * eps
    tried = 0
    for qsize in range(1, int(math.floor(r)) + 1):
        seen_multisets = set()
        for combo in itertools.combinations(range(len(pts)), qsize):
            multiset = tuple(sorted(pts[i] for i in combo))
            if multiset in seen_multisets:
                continue
            seen_multisets.add(multiset)
            tried += 1
            if tried > caps.extraction_enum_max:
                raise ResourceLimitError(
                    f"extraction search exceeded the cap of {caps.extraction_enum_max} subvectors"
                )
            Dq = _pairwise(F.values[:, multiset], pn)
            offq = Dq[np.triu_indices(R, k=1)]
            if offq.size == 0 or float(offq.min()) >= target:
                return multiset
    return None


# ---------------------------------------------------------------------------
# dimension oracles


@dataclass
class DimOracle:
    """A map eps -> dimension bound, measured on components or parametric.

    Measured oracles return the max over components of the exact
    fat-shattering dimension at eps (memoized, access serialized); parametric
    oracles return K * eps^(-d) on the validity range (0, M].
    """

    kind: Literal["measured", "parametric"]
    components: tuple[TabulatedClass, ...] | None = None
    witness_set: tuple[float, ...] | None = None
    K: float | None = None
    d: int | None = None
    M: float = 1.0
    caps: Caps = DEFAULT_CAPS
    _memo: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.kind == "measured":
            if not self.components:
                raise InputValidationError("measured oracle needs component classes")
            self.M = float(max(c.M for c in self.components))
        elif self.kind == "parametric":
            if not (self.K is not None and self.K > 0):
                raise InputValidationError("parametric oracle needs K > 0")
            if not (isinstance(self.d, int) and self.d >= 1):
                raise InputValidationError("parametric oracle needs integer d >= 1")
        else:
            raise InputValidationError(f"unknown oracle kind {self.kind!r}")

    @classmethod
    def measured(cls, components: Sequence[TabulatedClass],
                 witness_set: Sequence[float] | None = None,
                 caps: Caps = DEFAULT_CAPS) -> "DimOracle":
        wit = tuple(sorted({float(w) for w in witness_set})) if witness_set else None
        return cls(kind="measured", components=tuple(components), witness_set=wit, caps=caps)

    @classmethod
    def parametric(cls, K: float, d: int, M: float = 1.0) -> "DimOracle":
        return cls(kind="parametric", K=float(K), d=int(d), M=float(M))

    def __call__(self, eps: float) -> float:
        return dim_oracle_eval(self, eps)


def dim_oracle_eval(o: DimOracle, eps: float) -> float:
    """Evaluate a dimension oracle at eps in (0, M]."""
    if not (0 < eps <= o.M):
        raise InputValidationError(f"eps must lie in (0, {o.M}], got {eps!r}")
    if o.kind == "parametric":
        return float(o.K * eps ** (-o.d))
    with o._lock:
        if eps in o._memo:
            return o._memo[eps]
        val = 0
        for c in o.components:
            val = max(val, fat_shattering_dim(c, eps, o.witness_set, caps=o.caps).dim)
        o._memo[eps] = float(val)
        return float(val)


# ---------------------------------------------------------------------------
# debug graph emission


def graph_edges_text(F: TabulatedClass, pts: Sequence[int], eps: float, p: PNorm,
                     kind: Literal["separation", "cover"] = "separation") -> str:
    """Adjacency list of the separation (>= eps) or cover (< eps) graph.

    One line per edge: "i j dist" over the distinct restricted rows.
    """
    V = _distinct_restriction(F, pts)
    D = _pairwise(V, p)
    lines = []
    for i in range(D.shape[0]):
        for j in range(i + 1, D.shape[0]):
            d = float(D[i, j])
            keep = _separated(d, eps, 0.0) if kind == "separation" else _covers(d, eps, 0.0)
            if keep:
                lines.append(f"{i} {j} {d!r}")
    return "\n".join(lines) + ("\n" if lines else "")
