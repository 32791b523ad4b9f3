import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from capacity_lab.fclass import (
    GroundSet,
    TabulatedClass,
    joint_vector_class,
    random_uniform_class,
)
from capacity_lab.risk import DiscreteDistribution


@pytest.fixture
def constants_class():
    """Three constant functions {0, 0.5, 1} on two points."""
    return TabulatedClass(M=1.0, ground=GroundSet(2), values=[[0, 0], [0.5, 0.5], [1, 1]])


@pytest.fixture
def pm_one_class():
    """{f, -f} with f identically 1 on two points."""
    return TabulatedClass(M=1.0, ground=GroundSet(2), values=[[1, 1], [-1, -1]])


def small_vector_class(seed=2024, C=3, rows=8, n=8, M=1.0):
    comps = [random_uniform_class(rows, n, M, (seed, k)) for k in range(C)]
    return joint_vector_class(comps)


def uniform_product_distribution(n_points, C):
    p = 1.0 / (n_points * C)
    atoms = [(x, y, p) for x in range(n_points) for y in range(1, C + 1)]
    # exact unit sum regardless of float division dust
    total = sum(a[2] for a in atoms)
    atoms = [(x, y, q / total) for x, y, q in atoms]
    return DiscreteDistribution(tuple(atoms), n_points=n_points, C=C)


def random_distribution(seed, n_points, C):
    rng = np.random.default_rng(seed)
    raw = rng.uniform(0.05, 1.0, size=n_points * C)
    raw = raw / raw.sum()
    raw = raw / raw.sum()  # second pass grinds the sum onto 1.0 within 1e-16
    atoms = []
    k = 0
    for x in range(n_points):
        for y in range(1, C + 1):
            atoms.append((x, y, float(raw[k])))
            k += 1
    return DiscreteDistribution(tuple(atoms), n_points=n_points, C=C)
