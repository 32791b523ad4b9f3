"""Decision rule, margin losses, and exact risks under finite distributions."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InputValidationError
from .fclass import STAR, LabeledSample, VectorClass

PROB_TOL = 1e-12

ZERO_ONE = "zero_one"
INDICATOR = "indicator"
TRUNCATED_HINGE = "truncated_hinge"


@dataclass(frozen=True)
class MarginLoss:
    """A [0, 1]-valued nonincreasing loss; gamma applies to the margin kinds.

    kind "zero_one" is the plain error indicator 1{t <= 0}; "indicator" is the
    sharp margin version 1{t < gamma}; "truncated_hinge" interpolates linearly
    between 1 at t <= 0 and 0 at t >= gamma.
    """

    kind: str
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in (ZERO_ONE, INDICATOR, TRUNCATED_HINGE):
            raise InputValidationError(f"unknown loss kind {self.kind!r}")
        if self.kind == ZERO_ONE:
            if self.gamma is not None:
                raise InputValidationError("zero_one loss takes no gamma")
        else:
            if self.gamma is None or not 0 < self.gamma <= 1:
                raise InputValidationError(f"gamma must lie in (0, 1], got {self.gamma!r}")


def loss_eval(loss: MarginLoss, t: float) -> float:
    if loss.kind == ZERO_ONE:
        return 1.0 if t <= 0 else 0.0
    g = loss.gamma
    if loss.kind == INDICATOR:
        return 1.0 if t < g else 0.0
    # truncated hinge
    if t <= 0:
        return 1.0
    if t <= g:
        return 1.0 - t / g
    return 0.0


def loss_eval_array(loss: MarginLoss, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if loss.kind == ZERO_ONE:
        return (t <= 0).astype(np.float64)
    g = loss.gamma
    if loss.kind == INDICATOR:
        return (t < g).astype(np.float64)
    return np.where(t <= 0, 1.0, np.where(t <= g, 1.0 - t / g, 0.0))


def validate_margin_loss(fn: Callable[[float, float], float],
                         gammas: Sequence[float] = (0.25, 0.5, 0.75, 1.0),
                         grid_size: int = 101) -> None:
    """Check a candidate loss fn(gamma, t) on a sample grid before use.

    Verifies values in [0, 1], fn(gamma, 0) = 1 and fn(gamma, gamma) = 0,
    nonincreasingness in t, and monotonicity in gamma on (0, gamma).
    Raises InputValidationError on the first violation.
    """
    for g in gammas:
        if not 0 < g <= 1:
            raise InputValidationError("validation gammas must lie in (0, 1]")
        ts = np.linspace(-1.5, 1.5, grid_size)
        vals = [fn(g, float(t)) for t in ts]
        for t, v in zip(ts, vals):
            if not 0.0 <= v <= 1.0:
                raise InputValidationError(f"loss value {v} at t={t} outside [0, 1]")
        for a, b in zip(vals, vals[1:]):
            if b > a + 1e-12:
                raise InputValidationError("loss is not nonincreasing")
        if fn(g, 0.0) != 1.0:
            raise InputValidationError(f"loss at 0 must be 1, got {fn(g, 0.0)} for gamma={g}")
        if fn(g, g) != 0.0:
            raise InputValidationError(f"loss at gamma must be 0, got {fn(g, g)} for gamma={g}")
    for g1 in gammas:
        for g2 in gammas:
            if g1 >= g2:
                continue
            for t in np.linspace(1e-9, g1 * (1 - 1e-9), 33):
                if fn(g1, float(t)) > fn(g2, float(t)) + 1e-12:
                    raise InputValidationError(
                        f"loss not monotone in gamma at t={t}: f_{g1}(t) > f_{g2}(t)"
                    )


_LOSS_REGISTRY: dict[str, Callable[[float, float], float]] = {}


def register_margin_loss(name: str, fn: Callable[[float, float], float]) -> None:
    """Register a custom loss fn(gamma, t) after validating its axioms."""
    if name in (ZERO_ONE, INDICATOR, TRUNCATED_HINGE) or name in _LOSS_REGISTRY:
        raise InputValidationError(f"loss name {name!r} already taken")
    validate_margin_loss(fn)
    _LOSS_REGISTRY[name] = fn


def registered_margin_loss(name: str) -> Callable[[float, float], float]:
    if name not in _LOSS_REGISTRY:
        raise InputValidationError(f"no registered loss named {name!r}")
    return _LOSS_REGISTRY[name]


@dataclass(frozen=True)
class DiscreteDistribution:
    """A finite probability table over (point index, label) pairs."""

    atoms: tuple[tuple[int, int, float], ...]  # (x, y, p)
    n_points: int
    C: int

    def __post_init__(self):
        atoms = tuple((int(x), int(y), float(p)) for x, y, p in self.atoms)
        if not atoms:
            raise InputValidationError("distribution needs at least one atom")
        total = 0.0
        for i, (x, y, p) in enumerate(atoms):
            if not 0 <= x < self.n_points:
                raise InputValidationError(f"atom {i}: point index {x} outside ground set")
            if not 1 <= y <= self.C:
                raise InputValidationError(f"atom {i}: label {y} outside 1..{self.C}")
            if p < 0:
                raise InputValidationError(f"atom {i}: negative probability {p}")
            total += p
        if abs(total - 1.0) > PROB_TOL:
            raise InputValidationError(f"probabilities sum to {total}, not 1 within {PROB_TOL}")
        object.__setattr__(self, "atoms", atoms)

    def probabilities(self) -> np.ndarray:
        return np.asarray([p for _, _, p in self.atoms], dtype=np.float64)

    def sample(self, rng: np.random.Generator, m: int) -> LabeledSample:
        probs = self.probabilities()
        probs = probs / probs.sum()  # renormalize the 1e-12 dust away
        idx = rng.choice(len(self.atoms), size=m, p=probs)
        entries = tuple((self.atoms[i][0], self.atoms[i][1]) for i in idx)
        return LabeledSample(entries, n_points=self.n_points, C=self.C)


def load_distribution(path: str, n_points: int, C: int) -> DiscreteDistribution:
    """Read {"atoms": [{"x": int, "y": int, "p": real}, ...]}."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise InputValidationError(f"{path}:{e.lineno}: invalid JSON ({e.msg})") from e
    if "atoms" not in obj:
        raise InputValidationError(f"{path}: missing field 'atoms'")
    atoms = []
    for i, a in enumerate(obj["atoms"]):
        for key in ("x", "y", "p"):
            if key not in a:
                raise InputValidationError(f"{path}: atoms[{i}]: missing field {key!r}")
        atoms.append((a["x"], a["y"], a["p"]))
    return DiscreteDistribution(tuple(atoms), n_points=n_points, C=C)


def save_distribution(P: DiscreteDistribution, path: str) -> None:
    obj = {"atoms": [{"x": x, "y": y, "p": p} for x, y, p in P.atoms]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def decision_rule(G: VectorClass, j: int, x: int):
    """Index of the uniquely best component at x, or STAR on a tie."""
    if not 0 <= j < G.size:
        raise InputValidationError("function index out of range")
    if not 0 <= x < G.ground.n:
        raise InputValidationError("point index out of range")
    scores = [c.values[j, x] for c in G.components]
    best = max(scores)
    winners = [k for k, s in enumerate(scores) if s == best]
    return winners[0] + 1 if len(winners) == 1 else STAR


def margin_value(G: VectorClass, j: int, x: int, y: int) -> float:
    """Half the gap between the label-y score and the best other score."""
    scores = [c.values[j, x] for c in G.components]
    own = scores[y - 1]
    rest = max(s for k, s in enumerate(scores) if k != y - 1)
    return 0.5 * (own - rest)


def expected_risk(G: VectorClass, j: int, P: DiscreteDistribution, loss: MarginLoss) -> float:
    """Exact expectation of loss(margin) over the finite distribution.

    With the zero_one loss this equals the misclassification probability,
    ties counting as errors.
    """
    if P.n_points != G.ground.n or P.C != G.C:
        raise InputValidationError("distribution and class shapes disagree")
    total = 0.0
    for x, y, p in P.atoms:
        total += p * loss_eval(loss, margin_value(G, j, x, y))
    return total


def empirical_risk(G: VectorClass, j: int, sample: LabeledSample, loss: MarginLoss) -> float:
    """Mean loss of the margin values over the sample entries."""
    if sample.n_points != G.ground.n or sample.C != G.C:
        raise InputValidationError("sample and class shapes disagree")
    vals = [loss_eval(loss, margin_value(G, j, x, y)) for x, y in sample.entries]
    return float(sum(vals) / len(vals))
