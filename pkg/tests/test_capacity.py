import math

import numpy as np
import pytest

import oracles
from capacity_lab.capacity import (
    Caps,
    CapacityQuery,
    DimOracle,
    Enumerate,
    Sample,
    covering_number,
    default_witness_values,
    dim_oracle_eval,
    enriched_witness_values,
    extraction_constant,
    extraction_search,
    fat_shattering_dim,
    graph_edges_text,
    packing_number,
    uniform_capacity,
)
from capacity_lab.errors import InputValidationError, PreconditionError, ResourceLimitError
from capacity_lab.fclass import (
    GroundSet,
    TabulatedClass,
    all_functions_class,
    random_grid_class,
    random_uniform_class,
)
from capacity_lab.metric import P1, P2, PINF, PNorm


def q_pack(eps, p=P1, mode="exact"):
    return CapacityQuery(eps=eps, p=p, mode=mode, measure="packing")


def q_cover(eps, p=P1, mode="exact", ambient=None):
    return CapacityQuery(eps=eps, p=p, mode=mode, measure="covering", ambient=ambient)


def random_mixed_class(seed, max_rows=8, max_n=4):
    rng = np.random.default_rng(seed)
    rows = int(rng.integers(2, max_rows + 1))
    n = int(rng.integers(1, max_n + 1))
    if rng.random() < 0.5:
        return random_uniform_class(rows, n, 1.0, rng.integers(0, 2**32))
    grid = [j / 4 - 0.5 for j in range(5)]
    return random_grid_class(rows, n, grid, rng.integers(0, 2**32), M=1.0)


class TestPacking:
    def test_constants_examples(self, constants_class):
        pts = (0, 1)
        assert packing_number(constants_class, pts, q_pack(0.5)).value == 3
        assert packing_number(constants_class, pts, q_pack(0.6)).value == 2
        assert packing_number(constants_class, pts, q_pack(1.1)).value == 1

    def test_matches_bruteforce(self):
        for seed in range(30):
            F = random_mixed_class(seed)
            pts = tuple(range(F.ground.n))
            rng = np.random.default_rng((seed, 99))
            for p_lab, p_bf in ((P1, 1), (P2, 2), (PINF, "inf")):
                eps = float(rng.uniform(0.05, 2.0))
                got = packing_number(F, pts, q_pack(eps, p_lab)).value
                want = oracles.bf_packing(F.values.tolist(), pts, p_bf, eps)
                assert got == want, (seed, str(p_lab), eps)

    def test_greedy_is_lower_bound(self):
        for seed in range(20):
            F = random_mixed_class(seed)
            pts = tuple(range(F.ground.n))
            eps = 0.4
            greedy = packing_number(F, pts, q_pack(eps, P2, mode="greedy"))
            exact = packing_number(F, pts, q_pack(eps, P2))
            assert not greedy.exact and exact.exact
            assert greedy.value <= exact.value

    def test_nonincreasing_in_eps(self):
        F = random_mixed_class(7)
        pts = tuple(range(F.ground.n))
        vals = [packing_number(F, pts, q_pack(e, P2)).value for e in (0.1, 0.3, 0.7, 1.4)]
        assert vals == sorted(vals, reverse=True)

    def test_cap_raises(self):
        F = random_uniform_class(70, 2, 1.0, 0)
        with pytest.raises(ResourceLimitError, match="GREEDY"):
            packing_number(F, (0, 1), q_pack(0.2), caps=Caps(exact_solver_max=64))


class TestCovering:
    def test_constants_examples(self, constants_class):
        pts = (0, 1)
        assert covering_number(constants_class, pts, q_cover(0.6)).value == 1
        assert covering_number(constants_class, pts, q_cover(0.4)).value == 3

    def test_single_function(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(1), values=[[0.3]])
        assert covering_number(F, (0,), q_cover(0.01)).value == 1

    def test_matches_bruteforce(self):
        for seed in range(30):
            F = random_mixed_class(seed + 1000)
            pts = tuple(range(F.ground.n))
            rng = np.random.default_rng((seed, 77))
            for p_lab, p_bf in ((P1, 1), (P2, 2), (PINF, "inf")):
                eps = float(rng.uniform(0.05, 2.0))
                got = covering_number(F, pts, q_cover(eps, p_lab)).value
                want = oracles.bf_covering(F.values.tolist(), pts, p_bf, eps)
                assert got == want, (seed, str(p_lab), eps)

    def test_greedy_is_upper_bound(self):
        for seed in range(20):
            F = random_mixed_class(seed + 500)
            pts = tuple(range(F.ground.n))
            eps = 0.35
            greedy = covering_number(F, pts, q_cover(eps, P2, mode="greedy"))
            exact = covering_number(F, pts, q_cover(eps, P2))
            assert greedy.value >= exact.value

    def test_kolmogorov_inequality(self):
        for seed in range(40):
            F = random_mixed_class(seed + 2000)
            pts = tuple(range(F.ground.n))
            rng = np.random.default_rng((seed, 3))
            eps = float(rng.uniform(0.05, 2.0))
            for p in (P1, P2, PINF):
                cov = covering_number(F, pts, q_cover(eps, p)).value
                pk = packing_number(F, pts, q_pack(eps, p)).value
                assert cov <= pk

    def test_nonincreasing_in_eps(self):
        F = random_mixed_class(17)
        pts = tuple(range(F.ground.n))
        vals = [covering_number(F, pts, q_cover(e, P2)).value for e in (0.1, 0.3, 0.7, 1.4)]
        assert vals == sorted(vals, reverse=True)

    def test_ambient_centers(self, constants_class):
        ambient = TabulatedClass(M=1.0, ground=GroundSet(2),
                                 values=[[0.25, 0.25], [0.75, 0.75]])
        got = covering_number(constants_class, (0, 1), q_cover(0.3, P1, ambient=ambient))
        assert got.value == 2  # 0.25 covers {0, 0.5}, 0.75 covers {0.5, 1}

    def test_ambient_ground_mismatch(self, constants_class):
        other = TabulatedClass(M=1.0, ground=GroundSet(3), values=[[0, 0, 0]])
        with pytest.raises(InputValidationError):
            covering_number(constants_class, (0, 1), q_cover(0.3, P1, ambient=other))

    def test_uncoverable_ambient(self, constants_class):
        far = TabulatedClass(M=1.0, ground=GroundSet(2), values=[[-1.0, -1.0]])
        with pytest.raises(PreconditionError):
            covering_number(constants_class, (0, 1), q_cover(0.2, P1, ambient=far))


class TestUniform:
    def test_constants_packing_single_point(self, constants_class):
        got = uniform_capacity(constants_class, 1, q_pack(0.6))
        assert got == (2, True)

    def test_single_function_covering(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(3), values=[[0.1, 0.2, 0.3]])
        for n in (1, 2, 5):
            assert uniform_capacity(F, n, q_cover(0.5, P2)).value == 1

    def test_enumerate_matches_bruteforce(self):
        for seed in range(10):
            F = random_mixed_class(seed + 300, max_rows=5, max_n=3)
            rng = np.random.default_rng((seed, 5))
            eps = float(rng.uniform(0.1, 1.5))
            for measure in ("packing", "covering"):
                q = CapacityQuery(eps=eps, p=P1, measure=measure)
                got = uniform_capacity(F, 2, q).value
                want = oracles.bf_uniform(F.values.tolist(), F.ground.n, 2, 1, eps, measure)
                assert got == want

    def test_enumerate_equals_max_over_samples(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(3),
                           values=[[0.0, 0.4, 0.9], [0.5, -0.4, 0.8], [1.0, 0.1, -0.7]])
        q = q_pack(0.5, P2)
        exact = uniform_capacity(F, 2, q, Enumerate())
        sampled = uniform_capacity(F, 2, q, Sample(k=60, seed=4))
        assert sampled.value <= exact.value
        assert sampled.value == exact.value  # 60 draws cover all 6 multisets
        assert exact.exact and not sampled.exact

    def test_sup_norm_shortcut_matches_enumeration(self):
        for seed in range(8):
            F = random_mixed_class(seed + 40, max_rows=5, max_n=3)
            eps = 0.45
            q = q_pack(eps, PINF)
            got = uniform_capacity(F, 2, q).value
            want = oracles.bf_uniform(F.values.tolist(), F.ground.n, 2, "inf", eps, "packing")
            assert got == want

    def test_enumeration_cap(self, constants_class):
        with pytest.raises(ResourceLimitError):
            uniform_capacity(constants_class, 30, q_pack(0.5), caps=Caps(multiset_enum_max=10))


class TestFatShattering:
    def test_nine_function_example(self):
        F = all_functions_class([0, 0.5, 1], 2)
        res = fat_shattering_dim(F, 0.5, witness_set=[0, 0.5, 1])
        assert res.dim == 2
        assert res.certificate.points == (0, 1)
        assert res.certificate.witnesses == (0.5, 0.5)
        assert res.certificate.replay(F)

    def test_nine_function_large_margin(self):
        F = all_functions_class([0, 0.5, 1], 2)
        assert fat_shattering_dim(F, 0.75, witness_set=[0, 0.5, 1]).dim == 0

    def test_single_function(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(2), values=[[0.4, -0.4]])
        assert fat_shattering_dim(F, 0.1).dim == 0

    def test_matches_bruteforce_on_declared_grid(self):
        for seed in range(15):
            F = random_mixed_class(seed + 600, max_rows=6, max_n=3)
            gamma = float(np.random.default_rng((seed, 1)).uniform(0.05, 0.8))
            wit = default_witness_values(F, gamma)
            if not wit:
                continue
            got = fat_shattering_dim(F, gamma, wit).dim
            want = oracles.bf_fat_shattering(F.values.tolist(), gamma, list(wit))
            assert got == want, (seed, gamma)

    def test_nonincreasing_in_margin(self):
        F = all_functions_class([0, 0.25, 0.5, 0.75, 1], 2)
        dims = [fat_shattering_dim(F, g).dim for g in (0.1, 0.25, 0.4, 0.6)]
        assert dims == sorted(dims, reverse=True)

    def test_certificate_replays(self):
        for seed in range(10):
            F = random_mixed_class(seed + 900, max_rows=8, max_n=4)
            res = fat_shattering_dim(F, 0.2)
            if res.certificate is not None:
                assert res.certificate.replay(F)

    def test_witness_grid_recorded(self):
        F = all_functions_class([0, 0.5, 1], 2)
        res = fat_shattering_dim(F, 0.5)
        assert res.witness_values == default_witness_values(F, 0.5)

    def test_enriched_grid_contains_default(self):
        F = random_uniform_class(4, 3, 1.0, 1)
        assert set(default_witness_values(F, 0.3)) <= set(enriched_witness_values(F, 0.3))

    def test_caps(self):
        F = random_uniform_class(4, 3, 1.0, 1)
        with pytest.raises(ResourceLimitError):
            fat_shattering_dim(F, 0.3, caps=Caps(fatdim_max_points=2))
        with pytest.raises(ResourceLimitError):
            fat_shattering_dim(F, 0.3, caps=Caps(fatdim_max_rows=3))

    def test_gamma_validation(self, constants_class):
        with pytest.raises(InputValidationError):
            fat_shattering_dim(constants_class, 0.0)


class TestExtraction:
    def test_constant_value(self):
        assert extraction_constant(1, 1.0) == pytest.approx(float(oracles.k_extract(1, 1.0)),
                                                            rel=1e-12)
        assert extraction_constant(1, 1.0) == pytest.approx(3 / 448, rel=1e-15)

    def test_shared_coordinate_instance(self):
        # rows 0, 1, 2 constant; every coordinate alone keeps them 1-separated
        F = TabulatedClass(M=2.0, ground=GroundSet(3),
                           values=[[0, 0, 0], [1, 1, 1], [2, 2, 2]])
        got = extraction_search(F, (0, 1, 2), 1.0, 1, 1)
        assert got is not None and len(got) == 1

    def test_absent_instance(self):
        # three rows pairwise 1-separated in L1, every single point breaks one pair
        F = TabulatedClass(M=2.0, ground=GroundSet(2),
                           values=[[0.0, 0.0], [0.1, 1.95], [1.95, 0.1]])
        assert extraction_search(F, (0, 1), 1.0, 1, 1) is None
        # the size condition of the underlying guarantee indeed fails here
        assert 3 > math.exp(extraction_constant(1, F.M) * 1 * 1.0)

    def test_not_separated_rejected(self, constants_class):
        with pytest.raises(PreconditionError):
            extraction_search(constants_class, (0, 1), 0.75, 1, 1)

    def test_smallest_subvector_returned(self):
        F = TabulatedClass(M=2.0, ground=GroundSet(2), values=[[0, 0], [1, 1]])
        got = extraction_search(F, (0, 1), 1.0, 2, 2)
        assert got is not None and len(got) == 1


class TestDimOracle:
    def test_parametric_examples(self):
        o = DimOracle.parametric(K=1.0, d=2, M=1.0)
        assert dim_oracle_eval(o, 0.5) == pytest.approx(4.0, abs=0)
        o2 = DimOracle.parametric(K=2.0, d=1, M=1.0)
        assert dim_oracle_eval(o2, 1.0) == pytest.approx(2.0, abs=0)

    def test_measured_nine_function(self):
        F = all_functions_class([0, 0.5, 1], 2)
        o = DimOracle.measured([F], witness_set=[0, 0.5, 1])
        assert dim_oracle_eval(o, 0.5) == 2.0
        assert dim_oracle_eval(o, 0.5) == 2.0  # memoized path

    def test_domain_validation(self):
        o = DimOracle.parametric(K=1.0, d=2, M=1.0)
        for bad in (0.0, 1.5, -0.1):
            with pytest.raises(InputValidationError):
                dim_oracle_eval(o, bad)

    def test_measured_nonincreasing(self):
        F = all_functions_class([0, 0.25, 0.5, 0.75, 1], 2)
        o = DimOracle.measured([F])
        vals = [dim_oracle_eval(o, e) for e in (0.1, 0.3, 0.6, 1.0)]
        assert vals == sorted(vals, reverse=True)


class TestGraphEmission:
    def test_edge_lines(self, constants_class):
        text = graph_edges_text(constants_class, (0, 1), 0.5, P1, "separation")
        lines = text.strip().splitlines()
        assert len(lines) == 3  # all pairs separated at 0.5
        i, j, d = lines[0].split()
        assert (int(i), int(j)) == (0, 1) and float(d) == 0.5

    def test_cover_graph(self, constants_class):
        text = graph_edges_text(constants_class, (0, 1), 0.6, P1, "cover")
        assert len(text.strip().splitlines()) == 2  # the two 0.5-distant pairs
