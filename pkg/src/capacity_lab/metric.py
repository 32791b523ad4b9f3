"""Empirical L_p pseudo-metrics over point multisets.

Distances are taken under the uniform counting measure on the listed points:
d_p(f, f') = ((1/n) * sum_i |f(t_i) - f'(t_i)|^p)^(1/p) for finite p, and the
max of the absolute differences for p = inf.  Points may repeat; repeats are
weighted by multiplicity, so uniform repetition leaves distances unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputValidationError
from .fclass import TabulatedClass

TRIANGLE_TOL = 1e-12


@dataclass(frozen=True)
class PNorm:
    """Either a finite integer exponent p >= 1 or the sup norm (INF)."""

    p: float

    def __post_init__(self):
        if self.p == math.inf:
            return
        if not (isinstance(self.p, (int, float)) and float(self.p).is_integer() and self.p >= 1):
            raise InputValidationError(f"p must be an integer >= 1 or INF, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))

    @classmethod
    def inf(cls) -> "PNorm":
        return cls(math.inf)

    @classmethod
    def parse(cls, text) -> "PNorm":
        if isinstance(text, PNorm):
            return text
        if isinstance(text, (int, float)):
            return cls(text)
        if str(text).strip().lower() in ("inf", "infinity", "oo"):
            return cls.inf()
        return cls(int(text))

    @property
    def is_inf(self) -> bool:
        return self.p == math.inf

    def __str__(self) -> str:
        return "inf" if self.is_inf else str(int(self.p))


P1 = PNorm(1)
P2 = PNorm(2)
PINF = PNorm.inf()


def _check_pts(F: TabulatedClass, pts: Sequence[int]) -> tuple[int, ...]:
    pts = tuple(int(p) for p in pts)
    if len(pts) == 0:
        raise InputValidationError("point multiset must be nonempty")
    for p in pts:
        if not 0 <= p < F.ground.n:
            raise InputValidationError(f"point index {p} outside ground set of size {F.ground.n}")
    return pts


def dist(F: TabulatedClass, i: int, j: int, pts: Sequence[int], p: PNorm) -> float:
    """Empirical L_p distance between rows i and j over a point multiset."""
    pts = _check_pts(F, pts)
    if not (0 <= i < F.size and 0 <= j < F.size):
        raise InputValidationError("function index out of range")
    diff = np.abs(F.values[i, pts] - F.values[j, pts])
    if p.is_inf:
        return float(diff.max())
    q = int(p.p)
    return float((diff**q).mean() ** (1.0 / q))


@dataclass(frozen=True)
class DistanceMatrix:
    """All pairwise distances of a class under one empirical pseudo-metric."""

    values: np.ndarray
    p: PNorm
    pts: tuple[int, ...]

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InputValidationError("distance matrix must be square")
        if np.any(arr < 0):
            raise InputValidationError("distances must be nonnegative")
        if np.any(np.diag(arr) != 0):
            raise InputValidationError("diagonal must be zero")
        if not np.array_equal(arr, arr.T):
            raise InputValidationError("distance matrix must be symmetric")
        _check_triangle(arr)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def size(self) -> int:
        return self.values.shape[0]


def _check_triangle(arr: np.ndarray) -> None:
    n = arr.shape[0]
    for k in range(n):  # chunk over the midpoint to keep memory flat
        via = arr[:, k : k + 1] + arr[k : k + 1, :]
        if np.any(arr - via > TRIANGLE_TOL):
            i, j = np.unravel_index(int(np.argmax(arr - via)), arr.shape)
            raise InputValidationError(
                f"triangle inequality violated beyond {TRIANGLE_TOL}: d({i},{j}) > d({i},{k}) + d({k},{j})"
            )


def pairwise_distances(F: TabulatedClass, pts: Sequence[int], p: PNorm) -> np.ndarray:
    """Raw pairwise distance array (no invariant checks), rows in class order."""
    pts = _check_pts(F, pts)
    V = F.values[:, pts]
    R = V.shape[0]
    out = np.zeros((R, R), dtype=np.float64)
    if p.is_inf:
        for i in range(R):
            out[i] = np.abs(V - V[i]).max(axis=1)
    else:
        q = int(p.p)
        for i in range(R):
            out[i] = (np.abs(V - V[i]) ** q).mean(axis=1) ** (1.0 / q)
    out = np.minimum(out, out.T)  # symmetrize float dust away
    np.fill_diagonal(out, 0.0)
    return out


def distance_matrix(F: TabulatedClass, pts: Sequence[int], p: PNorm) -> DistanceMatrix:
    """Validated pairwise distance matrix under d_{p, pts}."""
    pts = _check_pts(F, pts)
    return DistanceMatrix(values=pairwise_distances(F, pts, p), p=p, pts=pts)


def diameter(F: TabulatedClass, pts: Sequence[int], p: PNorm = P2) -> float:
    """Largest pairwise distance of the class under d_{p, pts}."""
    return float(pairwise_distances(F, pts, p).max())
