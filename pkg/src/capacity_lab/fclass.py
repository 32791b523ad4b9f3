"""Finite tabulated function classes and their transforms.

A scalar class is stored as a value matrix (one row per function, one column
per ground point); a vector-valued class is a tuple of component classes over
a shared ground set with jointly indexed rows.  The transforms implemented
here are the one-versus-best margin gap, piecewise-linear squashing into
[0, gamma], and floor quantization of values onto an eta grid over [0, 2M].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputValidationError, ResourceLimitError

STAR = "*"


def _as_matrix(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise InputValidationError(f"values must be a 2-d matrix, got ndim={arr.ndim}")
    return arr


@dataclass(frozen=True)
class GroundSet:
    """An index set of n >= 1 opaque points; only indices matter."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InputValidationError(f"ground set size must be an integer >= 1, got {self.n!r}")


@dataclass(frozen=True)
class TabulatedClass:
    """A finite class of functions into [-M, M], tabulated over a ground set."""

    M: float
    ground: GroundSet
    values: np.ndarray

    def __post_init__(self):
        if not (isinstance(self.M, (int, float)) and math.isfinite(self.M) and self.M > 0):
            raise InputValidationError(f"bound M must be a positive finite real, got {self.M!r}")
        arr = _as_matrix(self.values)
        if arr.shape[0] < 1:
            raise InputValidationError("a class needs at least one function (row)")
        if arr.shape[1] != self.ground.n:
            raise InputValidationError(
                f"row length {arr.shape[1]} does not match ground set size {self.ground.n}"
            )
        if not np.all(np.isfinite(arr)):
            raise InputValidationError("values must be finite")
        if np.abs(arr).max(initial=0.0) > self.M:
            bad = float(np.abs(arr).max())
            raise InputValidationError(f"entry magnitude {bad} exceeds bound M={self.M}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.ground.n

    def row(self, j: int) -> np.ndarray:
        return self.values[j]

    def to_json_dict(self) -> dict:
        return {"M": float(self.M), "n": self.n, "values": [[float(v) for v in r] for r in self.values]}


@dataclass(frozen=True)
class VectorClass:
    """C >= 3 component classes sharing ground set, bound M >= 1 and row count.

    Function j of the vector class is row j of every component, so the class
    size is the common row count.
    """

    components: tuple[TabulatedClass, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) < 3:
            raise InputValidationError(f"a vector class needs C >= 3 components, got {len(comps)}")
        first = comps[0]
        if first.M < 1:
            raise InputValidationError(f"vector class bound must satisfy M >= 1, got {first.M}")
        for k, c in enumerate(comps):
            if c.ground.n != first.ground.n:
                raise InputValidationError(f"component {k} ground size differs")
            if c.M != first.M:
                raise InputValidationError(f"component {k} bound {c.M} differs from {first.M}")
            if c.size != first.size:
                raise InputValidationError(f"component {k} row count differs")
        object.__setattr__(self, "components", comps)

    @property
    def C(self) -> int:
        return len(self.components)

    @property
    def M(self) -> float:
        return self.components[0].M

    @property
    def ground(self) -> GroundSet:
        return self.components[0].ground

    @property
    def size(self) -> int:
        return self.components[0].size

    def component_values(self) -> np.ndarray:
        """Stacked view with shape (C, size, n)."""
        return np.stack([c.values for c in self.components])

    def to_json_dict(self) -> dict:
        return {
            "C": self.C,
            "M": float(self.M),
            "n": self.ground.n,
            "components": [[[float(v) for v in r] for r in c.values] for c in self.components],
        }


@dataclass(frozen=True)
class LabeledSample:
    """A sequence of (point index, label) pairs with labels in 1..C."""

    entries: tuple[tuple[int, int], ...]
    n_points: int
    C: int

    def __post_init__(self):
        entries = tuple((int(x), int(y)) for x, y in self.entries)
        if len(entries) < 1:
            raise InputValidationError("a sample needs at least one entry")
        for i, (x, y) in enumerate(entries):
            if not 0 <= x < self.n_points:
                raise InputValidationError(f"entry {i}: point index {x} outside 0..{self.n_points - 1}")
            if not 1 <= y <= self.C:
                raise InputValidationError(f"entry {i}: label {y} outside 1..{self.C}")
        object.__setattr__(self, "entries", entries)

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def points(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.entries)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(y for _, y in self.entries)


@dataclass(frozen=True)
class CodomainGrid:
    """The N+1 equally spaced values {2M j / N : 0 <= j <= N} spanning [0, 2M]."""

    M: float
    N: int
    values: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        if not (isinstance(self.M, (int, float)) and self.M > 0):
            raise InputValidationError(f"grid bound M must be positive, got {self.M!r}")
        if not isinstance(self.N, int) or self.N < 4:
            raise InputValidationError(f"grid resolution N must be an integer >= 4, got {self.N!r}")
        vals = tuple(2.0 * self.M * j / self.N for j in range(self.N + 1))
        object.__setattr__(self, "values", vals)

    @property
    def step(self) -> float:
        return 2.0 * self.M / self.N


# ---------------------------------------------------------------------------
# transforms


def margin_transform(G: VectorClass, sample: LabeledSample) -> TabulatedClass:
    """Tabulate the margin gaps of every function of G over a labeled sample.

    Output entry (j, i) is half the gap between the score of the labeled
    category and the best competing category for function j at sample entry
    i.  The output has one column per sample entry and keeps the bound of G.
    """
    if sample.C != G.C:
        raise InputValidationError(f"sample labels assume C={sample.C}, class has C={G.C}")
    if sample.n_points != G.ground.n:
        raise InputValidationError("sample and class use different ground sets")
    stacked = G.component_values()  # (C, R, n)
    cols = np.empty((G.size, sample.m), dtype=np.float64)
    for i, (x, y) in enumerate(sample.entries):
        at_x = stacked[:, :, x]  # (C, R)
        own = at_x[y - 1]
        others = np.delete(at_x, y - 1, axis=0)
        cols[:, i] = 0.5 * (own - others.max(axis=0))
    np.clip(cols, -G.M, G.M, out=cols)
    return TabulatedClass(M=G.M, ground=GroundSet(sample.m), values=cols)


def margin_transform_full(G: VectorClass) -> TabulatedClass:
    """Margin gaps tabulated over the whole product domain (point, label).

    Column index is x * C + (k - 1) for point x and label k.
    """
    entries = tuple((x, k) for x in range(G.ground.n) for k in range(1, G.C + 1))
    sample = LabeledSample(entries, n_points=G.ground.n, C=G.C)
    return margin_transform(G, sample)


def squash(F: TabulatedClass, gamma: float) -> TabulatedClass:
    """Clip values through pi_gamma: zero below 0, identity on (0, gamma], gamma above."""
    if not (isinstance(gamma, (int, float)) and 0 < gamma <= 1):
        raise InputValidationError(f"gamma must lie in (0, 1], got {gamma!r}")
    v = F.values
    out = np.where(v > gamma, gamma, np.where(v > 0, v, 0.0))
    return TabulatedClass(M=float(gamma), ground=F.ground, values=out)


def squash_value(t: float, gamma: float) -> float:
    """Scalar pi_gamma, the same branches as squash."""
    if not 0 < gamma <= 1:
        raise InputValidationError(f"gamma must lie in (0, 1], got {gamma!r}")
    if t > gamma:
        return float(gamma)
    return float(t) if t > 0 else 0.0


def _floor_quantize(x: float, eta: float) -> int:
    """Largest j with j*eta <= x, robust to float division dust."""
    j = int(math.floor(x / eta))
    while (j + 1) * eta <= x:
        j += 1
    while j > 0 and j * eta > x:
        j -= 1
    return j


def discretize(F: TabulatedClass, eta: float) -> TabulatedClass:
    """Quantize values onto the eta grid over the shifted codomain [0, 2M].

    Each entry v maps to eta * floor((v + M) / eta).  Duplicate rows produced
    by the quantization are retained; deduplication is a separate step where
    an analysis needs injectivity.  The returned class carries bound 2M since
    its codomain is the shifted interval.
    """
    if not (isinstance(eta, (int, float)) and eta > 0):
        raise InputValidationError(f"eta must be positive, got {eta!r}")
    M = F.M
    shifted = F.values + M
    out = np.empty_like(shifted)
    flat_in = shifted.ravel()
    flat_out = out.ravel()
    for idx in range(flat_in.size):
        flat_out[idx] = _floor_quantize(float(flat_in[idx]), eta) * eta
    return TabulatedClass(M=2.0 * M, ground=F.ground, values=out)


def eta_grid(M: float, eta: float) -> tuple[float, ...]:
    """Grid values {eta * j} intersected with [0, 2M] (codomain of discretize)."""
    top = _floor_quantize(2.0 * M, eta)
    return tuple(eta * j for j in range(top + 1))


def dedupe_rows(F: TabulatedClass) -> TabulatedClass:
    """Drop duplicate rows, keeping first occurrences in order."""
    seen: dict[bytes, int] = {}
    keep: list[int] = []
    for j in range(F.size):
        key = F.values[j].tobytes()
        if key not in seen:
            seen[key] = j
            keep.append(j)
    if len(keep) == F.size:
        return F
    return TabulatedClass(M=F.M, ground=F.ground, values=F.values[keep])


def restrict(F: TabulatedClass, pts: Sequence[int]) -> TabulatedClass:
    """Re-tabulate F over a point multiset (columns selected with repetition)."""
    pts = tuple(int(p) for p in pts)
    if len(pts) == 0:
        raise InputValidationError("point multiset must be nonempty")
    for p in pts:
        if not 0 <= p < F.ground.n:
            raise InputValidationError(f"point index {p} outside ground set")
    return TabulatedClass(M=F.M, ground=GroundSet(len(pts)), values=F.values[:, pts])


def union_rows(components: Iterable[TabulatedClass]) -> TabulatedClass:
    """Row union of classes sharing a ground set and bound (duplicates dropped)."""
    comps = list(components)
    if not comps:
        raise InputValidationError("need at least one class")
    first = comps[0]
    for c in comps[1:]:
        if c.ground.n != first.ground.n or c.M != first.M:
            raise InputValidationError("union requires a shared ground set and bound")
    stacked = np.vstack([c.values for c in comps])
    return dedupe_rows(TabulatedClass(M=first.M, ground=first.ground, values=stacked))


# ---------------------------------------------------------------------------
# generators


def random_uniform_class(rows: int, n: int, M: float, seed) -> TabulatedClass:
    """Uniform random entries in [-M, M]; deterministic for a fixed seed."""
    if rows < 1 or n < 1:
        raise InputValidationError("rows and n must be >= 1")
    rng = np.random.default_rng(seed)
    vals = rng.uniform(-M, M, size=(rows, n))
    return TabulatedClass(M=float(M), ground=GroundSet(n), values=vals)


def random_grid_class(rows: int, n: int, grid_values: Sequence[float], seed,
                      shift: float = 0.0, M: float | None = None) -> TabulatedClass:
    """Random entries drawn from a finite value grid, optionally shifted.

    With shift=-M_grid a [0, 2M] grid is re-centered onto [-M, M].  The bound
    defaults to the largest magnitude among the shifted grid values.
    """
    vals = [float(v) + shift for v in grid_values]
    if not vals:
        raise InputValidationError("grid needs at least one value")
    if M is None:
        M = max(abs(v) for v in vals)
        if M == 0:
            M = 1.0
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(vals), size=(rows, n))
    mat = np.asarray(vals, dtype=np.float64)[idx]
    return TabulatedClass(M=float(M), ground=GroundSet(n), values=mat)


def all_functions_class(grid_values: Sequence[float], n: int,
                        cap: int = 200_000, M: float | None = None) -> TabulatedClass:
    """Every function from an n-point ground set into a finite value grid.

    The class has len(grid)**n rows in lexicographic order.  Raises when the
    enumeration would exceed the cap.
    """
    vals = [float(v) for v in grid_values]
    if not vals or n < 1:
        raise InputValidationError("need a nonempty grid and n >= 1")
    count = len(vals) ** n
    if count > cap:
        raise ResourceLimitError(f"all-functions enumeration of {count} rows exceeds cap {cap}")
    if M is None:
        M = max(abs(v) for v in vals) or 1.0
    base = np.asarray(vals, dtype=np.float64)
    idx = np.indices([len(vals)] * n).reshape(n, -1).T  # lexicographic
    return TabulatedClass(M=float(M), ground=GroundSet(n), values=base[idx])


def product_vector_class(factors: Sequence[TabulatedClass], cap: int = 100_000) -> VectorClass:
    """Assemble the full product of C component classes into a vector class.

    Joint row t of the result picks row t_k from factor k, enumerating all
    |G_1| * ... * |G_C| combinations in lexicographic order.
    """
    factors = list(factors)
    if len(factors) < 3:
        raise InputValidationError("need C >= 3 factors")
    total = math.prod(f.size for f in factors)
    if total > cap:
        raise ResourceLimitError(f"product of {total} joint rows exceeds cap {cap}")
    idx = np.indices([f.size for f in factors]).reshape(len(factors), -1)
    comps = [
        TabulatedClass(M=f.M, ground=f.ground, values=f.values[idx[k]])
        for k, f in enumerate(factors)
    ]
    return VectorClass(tuple(comps))


def joint_vector_class(components: Sequence[TabulatedClass]) -> VectorClass:
    """Assemble components with equal row counts into a jointly indexed class."""
    return VectorClass(tuple(components))


def _grid_from_spec(spec: dict) -> list[float]:
    if "values" in spec:
        return [float(v) for v in spec["values"]]
    grid = CodomainGrid(M=float(spec["M"]), N=int(spec["N"]))
    return list(grid.values)


def generate_class(spec: dict, seed):
    """Dispatch a generator description; deterministic for fixed (spec, seed).

    Kinds: "uniform", "grid" (optionally {"shifted": true}), "all_functions",
    "product" and "joint" (vector classes built from component sub-specs).
    """
    kind = spec.get("kind")
    if kind == "uniform":
        return random_uniform_class(int(spec["rows"]), int(spec["n"]), float(spec["M"]), seed)
    if kind == "grid":
        grid = _grid_from_spec(spec["grid"])
        shift = 0.0
        if spec.get("shifted"):
            shift = -(max(grid) + min(grid)) / 2.0
        return random_grid_class(int(spec["rows"]), int(spec["n"]), grid, seed,
                                 shift=shift, M=spec.get("M"))
    if kind == "all_functions":
        grid = _grid_from_spec(spec["grid"])
        return all_functions_class(grid, int(spec["n"]), cap=int(spec.get("cap", 200_000)),
                                   M=spec.get("M"))
    if kind in ("product", "joint"):
        subs = spec["components"]
        factors = []
        for k, sub in enumerate(subs):
            sub_seed = seed if isinstance(seed, (list, tuple)) else (seed,)
            factors.append(generate_class(sub, tuple(sub_seed) + (k,)))
        if kind == "product":
            return product_vector_class(factors, cap=int(spec.get("cap", 100_000)))
        return joint_vector_class(factors)
    raise InputValidationError(f"unknown generator kind {kind!r}")


# ---------------------------------------------------------------------------
# JSON file formats


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise InputValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def load_tabulated_class(path: str) -> TabulatedClass:
    """Read {"M": real, "n": int, "values": [[...], ...]} with field diagnostics."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise InputValidationError(f"{path}:{e.lineno}: invalid JSON ({e.msg})") from e
    where = f"{path}"
    M = _require(obj, "M", where)
    n = _require(obj, "n", where)
    values = _require(obj, "values", where)
    try:
        cls = TabulatedClass(M=float(M), ground=GroundSet(int(n)), values=_as_matrix(values))
    except InputValidationError as e:
        raise InputValidationError(f"{where}: field 'values': {e}") from e
    return cls


def load_vector_class(path: str) -> VectorClass:
    """Read {"C", "M", "n", "components": [matrix x C]} with field diagnostics."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise InputValidationError(f"{path}:{e.lineno}: invalid JSON ({e.msg})") from e
    where = f"{path}"
    C = int(_require(obj, "C", where))
    M = float(_require(obj, "M", where))
    n = int(_require(obj, "n", where))
    comps_raw = _require(obj, "components", where)
    if len(comps_raw) != C:
        raise InputValidationError(f"{where}: field 'components': expected {C} matrices, got {len(comps_raw)}")
    comps = []
    for k, mat in enumerate(comps_raw):
        try:
            comps.append(TabulatedClass(M=M, ground=GroundSet(n), values=_as_matrix(mat)))
        except InputValidationError as e:
            raise InputValidationError(f"{where}: field 'components[{k}]': {e}") from e
    try:
        return VectorClass(tuple(comps))
    except InputValidationError as e:
        raise InputValidationError(f"{where}: {e}") from e


def save_class(obj: TabulatedClass | VectorClass, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj.to_json_dict(), fh, indent=1)
        fh.write("\n")
