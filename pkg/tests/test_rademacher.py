import math

import numpy as np
import pytest

import oracles
from capacity_lab.capacity import Caps
from capacity_lab.errors import InputValidationError, ResourceLimitError
from capacity_lab.fclass import GroundSet, TabulatedClass, random_uniform_class
from capacity_lab.rademacher import massart_bound, rademacher_exact, rademacher_mc


class TestExact:
    def test_single_function_is_zero(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(3), values=[[0.3, -0.7, 0.1]])
        est = rademacher_exact(F, (0, 1, 2))
        assert est.value == 0.0 and est.method == "exact" and est.stderr is None

    def test_sign_pair_one_point(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(1), values=[[1.0], [-1.0]])
        assert rademacher_exact(F, (0,)).value == pytest.approx(1.0, abs=0)

    def test_sign_pair_two_points(self, pm_one_class):
        assert rademacher_exact(pm_one_class, (0, 1)).value == pytest.approx(0.5, abs=0)

    def test_matches_bruteforce(self):
        for seed in range(12):
            rng = np.random.default_rng(seed)
            rows = int(rng.integers(1, 6))
            n = int(rng.integers(1, 5))
            F = random_uniform_class(rows, n, 1.0, (seed, 1))
            pts = tuple(range(n))
            got = rademacher_exact(F, pts).value
            want = oracles.bf_rademacher(F.values.tolist(), pts)
            assert got == pytest.approx(want, abs=1e-12)

    def test_bounded_by_M(self):
        for seed in range(10):
            F = random_uniform_class(6, 5, 1.0, seed)
            assert 0 <= abs(rademacher_exact(F, tuple(range(5))).value) <= F.M

    def test_nonnegative_for_negation_closed(self):
        for seed in range(10):
            F = random_uniform_class(4, 4, 1.0, seed)
            sym = TabulatedClass(M=1.0, ground=F.ground,
                                 values=np.vstack([F.values, -F.values]))
            assert rademacher_exact(sym, tuple(range(4))).value >= 0.0

    def test_adding_row_never_decreases(self):
        for seed in range(10):
            F = random_uniform_class(5, 4, 1.0, seed)
            sub = TabulatedClass(M=1.0, ground=F.ground, values=F.values[:4])
            pts = tuple(range(4))
            assert rademacher_exact(F, pts).value >= rademacher_exact(sub, pts).value - 1e-15

    def test_cap(self):
        F = random_uniform_class(2, 6, 1.0, 0)
        with pytest.raises(ResourceLimitError, match="rademacher_mc"):
            rademacher_exact(F, tuple(range(6)), caps=Caps(rademacher_exact_max=5))


class TestMonteCarlo:
    def test_single_function_zero_with_zero_stderr(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(2), values=[[0.3, -0.7]])
        est = rademacher_mc(F, (0, 1), trials=50, seed=3)
        assert est.value == 0.0 and est.stderr == 0.0

    def test_close_to_exact(self, pm_one_class):
        est = rademacher_mc(pm_one_class, (0, 1), trials=100_000, seed=12)
        assert est.stderr is not None and est.stderr > 0
        assert abs(est.value - 0.5) <= 3 * est.stderr

    def test_deterministic_per_seed(self, pm_one_class):
        a = rademacher_mc(pm_one_class, (0, 1), trials=500, seed=9)
        b = rademacher_mc(pm_one_class, (0, 1), trials=500, seed=9)
        assert a.value == b.value and a.stderr == b.stderr
        c = rademacher_mc(pm_one_class, (0, 1), trials=500, seed=10)
        assert c.value != a.value

    def test_trials_validation(self, pm_one_class):
        with pytest.raises(InputValidationError):
            rademacher_mc(pm_one_class, (0, 1), trials=0, seed=1)


class TestMassart:
    def test_single_vector_zero(self):
        assert massart_bound([(1.0, 2.0)]) == 0.0

    def test_two_antipodal_vectors(self):
        got = massart_bound([(1, 1), (-1, -1)])
        assert got == pytest.approx(oracles.massart([(1, 1), (-1, -1)]), rel=1e-12)
        assert got == pytest.approx(0.8325546111576977, rel=1e-9)

    def test_duplicates_ignored(self):
        assert massart_bound([(1, 1), (1, 1), (-1, -1)]) == massart_bound([(1, 1), (-1, -1)])

    def test_empty_rejected(self):
        with pytest.raises(InputValidationError):
            massart_bound([])

    def test_mixed_lengths_rejected(self):
        with pytest.raises(InputValidationError):
            massart_bound([(1.0,), (1.0, 2.0)])

    def test_dominates_exact_rademacher(self):
        for seed in range(50):
            rng = np.random.default_rng((seed, 7))
            rows = int(rng.integers(1, 8))
            n = int(rng.integers(1, 6))
            F = random_uniform_class(rows, n, 1.0, (seed, 8))
            rhat = rademacher_exact(F, tuple(range(n))).value
            bound = massart_bound([tuple(map(float, r)) for r in F.values])
            assert rhat <= bound
