"""Empirical Rademacher complexity, exact and Monte Carlo, plus the
finite-class maximal inequality used inside chaining proofs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .capacity import Caps, DEFAULT_CAPS
from .errors import InputValidationError, ResourceLimitError
from .fclass import TabulatedClass

_CHUNK_BITS = 14  # sign vectors are enumerated in chunks of 2^14


@dataclass(frozen=True)
class RademacherEstimate:
    value: float
    method: str                  # "exact" or "mc(trials)"
    trials: int | None = None
    stderr: float | None = None  # Monte Carlo only

    def __post_init__(self):
        if self.method == "exact" and self.stderr is not None:
            raise InputValidationError("exact estimates carry no standard error")
        if self.trials is not None and self.trials < 1:
            raise InputValidationError("trials must be >= 1")


def _sample_values(F: TabulatedClass, pts: Sequence[int]) -> np.ndarray:
    pts = tuple(int(p) for p in pts)
    if len(pts) == 0:
        raise InputValidationError("point multiset must be nonempty")
    for p in pts:
        if not 0 <= p < F.ground.n:
            raise InputValidationError(f"point index {p} outside ground set")
    return F.values[:, pts]


def _distinct_rows(V: np.ndarray) -> np.ndarray:
    seen = set()
    keep = []
    for j in range(V.shape[0]):
        key = V[j].tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(j)
    return V[keep]


def rademacher_exact(F: TabulatedClass, pts: Sequence[int], *,
                     caps: Caps = DEFAULT_CAPS) -> RademacherEstimate:
    """Average over all 2^n sign vectors of the best signed row mean."""
    V = _distinct_rows(_sample_values(F, pts))
    n = V.shape[1]
    if n > caps.rademacher_exact_max:
        raise ResourceLimitError(
            f"{n} points means 2^{n} sign vectors (cap 2^{caps.rademacher_exact_max}); "
            "use rademacher_mc"
        )
    if V.shape[0] == 1:
        # the sup is linear in the signs, so the expectation is exactly zero
        return RademacherEstimate(value=0.0, method="exact")
    total = 0.0
    bits = np.arange(n, dtype=np.uint32)
    step = 1 << min(n, _CHUNK_BITS)
    for lo in range(0, 1 << n, step):
        codes = np.arange(lo, lo + step, dtype=np.uint64)
        signs = (((codes[:, None] >> bits) & 1) * 2.0 - 1.0)
        total += float((signs @ V.T).max(axis=1).sum())
    return RademacherEstimate(value=total / (n * (1 << n)), method="exact")


def _trial_rng(seed, t: int) -> np.random.Generator:
    if isinstance(seed, (tuple, list)):
        entropy = tuple(int(s) for s in seed) + (int(t),)
    else:
        entropy = (int(seed), int(t))
    return np.random.default_rng(entropy)


def rademacher_mc(F: TabulatedClass, pts: Sequence[int], trials: int, seed) -> RademacherEstimate:
    """Monte Carlo estimate; per-trial seeds derive from (seed, trial index).

    The reduction runs in trial order, so results are bit-stable for a seed.
    Standard error is the sample standard deviation over trials divided by
    sqrt(trials).
    """
    if trials < 1:
        raise InputValidationError("trials must be >= 1")
    V = _distinct_rows(_sample_values(F, pts))
    n = V.shape[1]
    if V.shape[0] == 1:
        # linear sup: the expectation is exactly zero, no sampling noise
        return RademacherEstimate(value=0.0, method=f"mc({trials})", trials=trials, stderr=0.0)
    draws = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        signs = rng.integers(0, 2, size=n).astype(np.float64) * 2.0 - 1.0
        draws[t] = (V @ signs).max() / n
    value = float(draws.mean())
    stderr = float(draws.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return RademacherEstimate(value=value, method=f"mc({trials})", trials=trials, stderr=stderr)


def massart_bound(vectors: Iterable[Sequence[float]]) -> float:
    """Finite-class maximal inequality: (max ||a||_2 / n) * sqrt(2 ln |A|).

    A is the set of distinct vectors; a single vector gives 0.
    """
    distinct = {tuple(float(v) for v in vec) for vec in vectors}
    if not distinct:
        raise InputValidationError("need at least one vector")
    lengths = {len(v) for v in distinct}
    if len(lengths) != 1:
        raise InputValidationError("vectors must share one length")
    n = lengths.pop()
    if n == 0:
        raise InputValidationError("vectors must be nonempty")
    if len(distinct) == 1:
        return 0.0
    max_norm = max(math.sqrt(sum(x * x for x in v)) for v in distinct)
    return (max_norm / n) * math.sqrt(2.0 * math.log(len(distinct)))
