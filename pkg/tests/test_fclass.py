import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capacity_lab.errors import InputValidationError, ResourceLimitError
from capacity_lab.fclass import (
    CodomainGrid,
    GroundSet,
    LabeledSample,
    TabulatedClass,
    VectorClass,
    all_functions_class,
    dedupe_rows,
    discretize,
    eta_grid,
    generate_class,
    joint_vector_class,
    load_tabulated_class,
    load_vector_class,
    margin_transform,
    margin_transform_full,
    product_vector_class,
    random_grid_class,
    random_uniform_class,
    restrict,
    save_class,
    squash,
    squash_value,
    union_rows,
)
from capacity_lab.risk import INDICATOR, TRUNCATED_HINGE, MarginLoss, loss_eval


def vclass_at_point(scores, M=1.0):
    comps = [TabulatedClass(M=M, ground=GroundSet(1), values=[[v]]) for v in scores]
    return VectorClass(tuple(comps))


class TestTypes:
    def test_ground_set_requires_positive_size(self):
        with pytest.raises(InputValidationError):
            GroundSet(0)

    def test_entries_must_respect_bound(self):
        with pytest.raises(InputValidationError):
            TabulatedClass(M=0.5, ground=GroundSet(1), values=[[0.6]])

    def test_rows_must_match_ground(self):
        with pytest.raises(InputValidationError):
            TabulatedClass(M=1.0, ground=GroundSet(3), values=[[0.0, 0.0]])

    def test_vector_class_needs_three_components(self):
        c = TabulatedClass(M=1.0, ground=GroundSet(1), values=[[0.0]])
        with pytest.raises(InputValidationError):
            VectorClass((c, c))

    def test_vector_class_bound_at_least_one(self):
        c = TabulatedClass(M=0.5, ground=GroundSet(1), values=[[0.0]])
        with pytest.raises(InputValidationError):
            VectorClass((c, c, c))

    def test_sample_validation(self):
        with pytest.raises(InputValidationError):
            LabeledSample(((0, 4),), n_points=2, C=3)
        with pytest.raises(InputValidationError):
            LabeledSample(((5, 1),), n_points=2, C=3)
        with pytest.raises(InputValidationError):
            LabeledSample((), n_points=2, C=3)

    def test_codomain_grid(self):
        g = CodomainGrid(M=0.5, N=4)
        assert g.values == (0.0, 0.25, 0.5, 0.75, 1.0)
        with pytest.raises(InputValidationError):
            CodomainGrid(M=0.5, N=3)

    def test_values_are_read_only(self, constants_class):
        with pytest.raises(ValueError):
            constants_class.values[0, 0] = 9.0


class TestMarginTransform:
    def test_gap_to_best_competitor(self):
        G = vclass_at_point([0.2, 0.8, -0.1])
        s2 = LabeledSample(((0, 2),), 1, 3)
        assert margin_transform(G, s2).values[0, 0] == pytest.approx(0.3, rel=1e-12)
        s1 = LabeledSample(((0, 1),), 1, 3)
        assert margin_transform(G, s1).values[0, 0] == pytest.approx(-0.3, rel=1e-12)

    def test_all_equal_scores_give_zero(self):
        G = vclass_at_point([0.4, 0.4, 0.4])
        for y in (1, 2, 3):
            s = LabeledSample(((0, y),), 1, 3)
            assert margin_transform(G, s).values[0, 0] == 0.0

    def test_label_out_of_range_rejected(self):
        G = vclass_at_point([0.2, 0.8, -0.1])
        with pytest.raises(InputValidationError):
            margin_transform(G, LabeledSample(((0, 4),), 1, 4))

    def test_entries_within_class_bound(self):
        rng = np.random.default_rng(5)
        comps = [random_uniform_class(4, 5, 1.0, (5, k)) for k in range(3)]
        G = joint_vector_class(comps)
        entries = tuple((int(rng.integers(0, 5)), int(rng.integers(1, 4))) for _ in range(10))
        out = margin_transform(G, LabeledSample(entries, 5, 3))
        assert np.abs(out.values).max() <= G.M

    def test_full_domain_tabulation_order(self):
        G = vclass_at_point([0.2, 0.8, -0.1])
        full = margin_transform_full(G)
        assert full.ground.n == 3  # one point, three labels
        assert full.values[0, 1] == pytest.approx(0.3, rel=1e-12)


class TestSquash:
    def test_branches(self):
        assert squash_value(0.3, 0.5) == 0.3
        assert squash_value(0.7, 0.5) == 0.5
        assert squash_value(-0.1, 0.5) == 0.0

    def test_output_range_and_bound(self, constants_class):
        out = squash(constants_class, 0.5)
        assert out.M == 0.5
        assert out.values.min() >= 0.0 and out.values.max() <= 0.5

    def test_gamma_validation(self, constants_class):
        for bad in (0.0, -1.0, 1.5):
            with pytest.raises(InputValidationError):
                squash(constants_class, bad)

    @given(st.floats(-3, 3), st.floats(0.01, 1.0))
    def test_idempotent(self, t, gamma):
        once = squash_value(t, gamma)
        assert squash_value(once, gamma) == once

    @given(st.floats(-3, 3), st.floats(0.01, 1.0))
    def test_margin_losses_unchanged_by_squashing(self, t, gamma):
        for kind in (INDICATOR, TRUNCATED_HINGE):
            loss = MarginLoss(kind, gamma)
            assert loss_eval(loss, squash_value(t, gamma)) == loss_eval(loss, t)


class TestDiscretize:
    def test_examples(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(3), values=[[0.3, -1.0, 1.0]])
        out = discretize(F, 0.5)
        assert list(out.values[0]) == [1.0, 0.0, 2.0]
        assert out.M == 2.0

    def test_eta_validation(self, constants_class):
        with pytest.raises(InputValidationError):
            discretize(constants_class, 0.0)

    @given(
        st.lists(st.floats(-1, 1), min_size=1, max_size=6),
        st.floats(1e-3, 2.0),
    )
    @settings(max_examples=200)
    def test_grid_membership_and_sandwich(self, vals, eta):
        F = TabulatedClass(M=1.0, ground=GroundSet(len(vals)), values=[vals])
        out = discretize(F, eta)
        grid = eta_grid(F.M, eta)
        for v, q in zip(vals, out.values[0]):
            assert q in grid
            # the float-exact sandwich: the shifted value falls in [g_j, g_{j+1})
            # where grid successors are computed as (j+1)*eta, matching the grid
            j = grid.index(q)
            assert q <= v + F.M < (j + 1) * eta
            assert 0.0 <= q <= 2.0 * F.M

    def test_duplicates_retained(self):
        F = TabulatedClass(M=1.0, ground=GroundSet(1), values=[[0.1], [0.12]])
        out = discretize(F, 0.5)
        assert out.size == 2
        assert out.values[0, 0] == out.values[1, 0]
        assert dedupe_rows(out).size == 1


class TestGenerators:
    def test_all_functions_count(self):
        F = all_functions_class([0, 0.5, 1], 2)
        assert F.size == 9
        assert len({tuple(r) for r in F.values}) == 9

    def test_all_functions_cap(self):
        with pytest.raises(ResourceLimitError):
            all_functions_class([0, 0.5, 1], 12, cap=1000)

    def test_uniform_deterministic(self):
        a = random_uniform_class(5, 3, 1.0, 77)
        b = random_uniform_class(5, 3, 1.0, 77)
        assert np.array_equal(a.values, b.values)

    def test_product_of_singletons(self):
        comps = [TabulatedClass(M=1.0, ground=GroundSet(2), values=[[0.1, 0.2]])] * 3
        G = product_vector_class(comps)
        assert G.size == 1 and G.C == 3

    def test_product_enumerates_all_combinations(self):
        f1 = TabulatedClass(M=1.0, ground=GroundSet(1), values=[[0.0], [1.0]])
        G = product_vector_class([f1, f1, f1])
        assert G.size == 8
        joint = {tuple(c.values[j, 0] for c in G.components) for j in range(8)}
        assert len(joint) == 8

    def test_generate_class_dispatch_deterministic(self):
        spec = {"kind": "grid", "rows": 4, "n": 3, "grid": {"M": 0.5, "N": 4}, "shifted": True}
        a = generate_class(spec, 9)
        b = generate_class(spec, 9)
        assert np.array_equal(a.values, b.values)
        assert np.abs(a.values).max() <= 0.5

    def test_generate_product_spec(self):
        spec = {
            "kind": "product",
            "components": [{"kind": "uniform", "rows": 2, "n": 2, "M": 1.0}] * 3,
        }
        G = generate_class(spec, 4)
        assert G.C == 3 and G.size == 8

    def test_grid_class_values_on_grid(self):
        grid = CodomainGrid(M=0.5, N=4)
        F = random_grid_class(6, 4, grid.values, 3, M=1.0)
        assert set(np.unique(F.values)) <= set(grid.values)


class TestHelpers:
    def test_restrict_repeats_columns(self, constants_class):
        out = restrict(constants_class, (0, 0, 1))
        assert out.ground.n == 3
        assert np.array_equal(out.values[:, 0], out.values[:, 1])

    def test_union_rows_dedupes(self, constants_class):
        u = union_rows([constants_class, constants_class])
        assert u.size == constants_class.size


class TestJson:
    def test_tabulated_round_trip(self, tmp_path, constants_class):
        path = tmp_path / "c.json"
        save_class(constants_class, path)
        back = load_tabulated_class(str(path))
        assert np.array_equal(back.values, constants_class.values)
        assert back.M == constants_class.M

    def test_vector_round_trip(self, tmp_path):
        comps = [random_uniform_class(3, 2, 1.0, (1, k)) for k in range(3)]
        G = joint_vector_class(comps)
        path = tmp_path / "g.json"
        save_class(G, path)
        back = load_vector_class(str(path))
        assert back.C == 3
        for a, b in zip(back.components, G.components):
            assert np.array_equal(a.values, b.values)

    def test_reader_names_bad_field(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"M": 1.0, "n": 2, "values": [[0.0, 2.0]]}))
        with pytest.raises(InputValidationError, match="values"):
            load_tabulated_class(str(path))

    def test_reader_reports_missing_field(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"M": 1.0, "values": [[0.0]]}))
        with pytest.raises(InputValidationError, match="'n'"):
            load_tabulated_class(str(path))

    def test_reader_reports_json_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"M": 1.0,\n  "n": }')
        with pytest.raises(InputValidationError, match=":2"):
            load_tabulated_class(str(path))
