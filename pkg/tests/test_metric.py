import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capacity_lab.errors import InputValidationError
from capacity_lab.fclass import GroundSet, TabulatedClass, random_uniform_class
from capacity_lab.metric import (
    P1,
    P2,
    PINF,
    DistanceMatrix,
    PNorm,
    diameter,
    dist,
    distance_matrix,
    pairwise_distances,
)


def two_rows(diffs):
    """A pair of rows whose absolute differences are exactly `diffs`."""
    n = len(diffs)
    return TabulatedClass(M=1.0, ground=GroundSet(n),
                          values=[[0.0] * n, list(diffs)])


class TestPNorm:
    def test_parse(self):
        assert PNorm.parse("1") == P1
        assert PNorm.parse("inf").is_inf
        assert PNorm.parse(2) == P2
        assert str(PINF) == "inf"

    def test_rejects_bad_exponents(self):
        for bad in (0, -1, 1.5):
            with pytest.raises(InputValidationError):
                PNorm(bad)


class TestDist:
    def test_quadratic_mean_example(self):
        F = two_rows([0.3, 0.4])
        got = dist(F, 0, 1, (0, 1), P2)
        assert got == pytest.approx(math.sqrt((0.09 + 0.16) / 2), rel=1e-12)

    def test_sup_example(self):
        F = two_rows([0.3, 0.4])
        assert dist(F, 0, 1, (0, 1), PINF) == pytest.approx(0.4, abs=0)

    def test_identical_rows_at_zero(self):
        F = two_rows([0.3, 0.4])
        assert dist(F, 0, 0, (0, 1), P1) == 0.0

    def test_empty_points_rejected(self):
        F = two_rows([0.3])
        with pytest.raises(InputValidationError):
            dist(F, 0, 1, (), P1)

    def test_multiset_weighting(self):
        F = two_rows([0.2, 0.8])
        # point 1 listed twice carries double weight under the counting measure
        assert dist(F, 0, 1, (0, 1, 1), P1) == pytest.approx((0.2 + 1.6) / 3, rel=1e-12)


class TestDistanceMatrix:
    def test_matches_entrywise_dist(self):
        F = random_uniform_class(6, 4, 1.0, 11)
        pts = (0, 1, 2, 3)
        dm = distance_matrix(F, pts, P2)
        for i in range(6):
            for j in range(6):
                assert dm.values[i, j] == pytest.approx(dist(F, i, j, pts, P2), abs=1e-15)

    def test_single_function_matrix(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(2), values=[[0.1, 0.2]])
        dm = distance_matrix(F, (0, 1), P1)
        assert dm.values.shape == (1, 1) and dm.values[0, 0] == 0.0

    def test_constants_offdiagonals(self, constants_class):
        dm = distance_matrix(constants_class, (0, 1), P1)
        off = sorted(dm.values[np.triu_indices(3, k=1)])
        assert off == pytest.approx([0.5, 0.5, 1.0], rel=1e-12)

    def test_triangle_validation_fires(self):
        bad = np.array([[0.0, 1.0, 0.1], [1.0, 0.0, 0.1], [0.1, 0.1, 0.0]])
        with pytest.raises(InputValidationError, match="triangle"):
            DistanceMatrix(values=bad, p=P1, pts=(0,))


class TestProperties:
    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_p(self, seed):
        F = random_uniform_class(4, 3, 1.0, seed)
        pts = (0, 1, 2)
        for i in range(F.size):
            for j in range(i + 1, F.size):
                seq = [dist(F, i, j, pts, PNorm(p)) for p in (1, 2, 4)]
                seq.append(dist(F, i, j, pts, PINF))
                for a, b in zip(seq, seq[1:]):
                    assert a <= b + 1e-12

    @given(st.integers(0, 10_000), st.integers(2, 4))
    @settings(max_examples=60, deadline=None)
    def test_uniform_repetition_invariance(self, seed, k):
        F = random_uniform_class(3, 4, 1.0, seed)
        base = (0, 1, 2, 3)
        rep = base * k
        for p in (P1, P2, PINF):
            assert dist(F, 0, 1, rep, p) == pytest.approx(dist(F, 0, 1, base, p), abs=1e-12)

    def test_diameter_is_max_pairwise(self, constants_class):
        assert diameter(constants_class, (0, 1), P2) == pytest.approx(1.0, rel=1e-12)
        D = pairwise_distances(constants_class, (0, 1), P2)
        assert diameter(constants_class, (0, 1), P2) == D.max()
