from fractions import Fraction

import pytest

from monoext import (
    MonotoneBijection,
    MonotoneMap1D,
    QuerySet,
    ValueScale,
    build_poset,
    build_witness,
    chain_bounds,
    conditional_max,
    conditional_min,
    disjoint_bound,
    grid_poset,
    reverse_reduce,
    scale_from_m,
    solve_max,
    solve_min,
)
from monoext.errors import (
    EmptyQuery,
    InvalidPermutation,
    NotAChain,
    NotIncreasing,
    PreconditionViolated,
    ValidationError,
)


def chain3():
    return build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])


class TestValueScale:
    def test_floats_held_exactly(self):
        s = ValueScale([0.25, 0.5, 1.0])
        assert s.values == (Fraction(1, 4), Fraction(1, 2), Fraction(1))

    def test_not_increasing(self):
        with pytest.raises(NotIncreasing):
            ValueScale([1, 1, 2])

    def test_rank_lookup(self):
        s = ValueScale([5, 7, 9])
        assert s.value(2) == 7
        with pytest.raises(ValidationError):
            s.value(0)


class TestConditionalValues:
    def test_grid_singleton(self):
        p = grid_poset(2, "product")
        s = ValueScale([1, 2, 3, 4])
        q = QuerySet(p, [(1, 2)])
        assert conditional_min(p, s, q, (0,)) == 2
        assert conditional_max(p, s, q, (0,)) == 3

    def test_chain_middle_is_forced(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["b"])
        assert conditional_min(p, s, q, (0,)) == 2
        assert conditional_max(p, s, q, (0,)) == 2

    def test_grid_antichain_both_orderings(self):
        p = grid_poset(2, "product")
        s = ValueScale([1, 2, 3, 4])
        q = QuerySet(p, [(1, 2), (2, 1)])
        for perm in [(0, 1), (1, 0)]:
            assert conditional_min(p, s, q, perm) == 5
            assert conditional_max(p, s, q, perm) == 5

    def test_invalid_ordering_rejected(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["a", "c"])
        with pytest.raises(InvalidPermutation):
            conditional_min(p, s, q, (1, 0))
        with pytest.raises(InvalidPermutation):
            conditional_min(p, s, q, (0, 0))


class TestSolve:
    def test_global_top_is_forced(self):
        p = grid_poset(2, "product")
        s = ValueScale([1, 2, 3, 4])
        q = QuerySet(p, [(2, 2)])
        assert solve_min(p, s, q).objective == 4
        assert solve_max(p, s, q).objective == 4

    def test_full_antichain_sums_everything(self):
        p = build_poset(["a", "b", "c"], [])
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["a", "b", "c"])
        assert solve_min(p, s, q).objective == 6
        assert solve_max(p, s, q).objective == 6

    def test_chain_endpoints(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["a", "c"])
        res = solve_min(p, s, q)
        assert res.objective == 4
        assert res.per_node_values == (Fraction(1), Fraction(3))

    def test_empty_query_rejected(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, [])
        with pytest.raises(EmptyQuery):
            solve_min(p, s, q)
        with pytest.raises(EmptyQuery):
            solve_max(p, s, q)

    def test_scale_size_mismatch(self):
        with pytest.raises(ValidationError):
            solve_min(chain3(), ValueScale([1, 2]), QuerySet(chain3(), ["a"]))

    def test_per_node_values_strictly_increase(self):
        p = build_poset(range(5), [(0, 1), (0, 2), (2, 3)])
        s = ValueScale([2, 3, 5, 7, 11])
        q = QuerySet(p, [1, 2, 4])
        for res in (solve_min(p, s, q), solve_max(p, s, q)):
            assert all(
                a < b
                for a, b in zip(res.per_node_values, res.per_node_values[1:])
            )
            assert res.objective == sum(res.per_node_values)


class TestBuildWitness:
    def test_chain_witness_is_rank_order(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["b"])
        w = build_witness(p, s, q, (0,), "min")
        assert dict(w.items()) == {"a": 1, "b": 2, "c": 3}

    def test_grid_min_witness(self):
        p = grid_poset(2, "product")
        s = ValueScale([1, 2, 3, 4])
        q = QuerySet(p, [(1, 2)])
        w = build_witness(p, s, q, (0,), "min")
        assert w.value((1, 1)) == 1
        assert w.value((1, 2)) == 2
        assert {w.value((2, 1)), w.value((2, 2))} == {3, 4}

    def test_grid_max_witness(self):
        p = grid_poset(2, "product")
        s = ValueScale([1, 2, 3, 4])
        q = QuerySet(p, [(1, 2)])
        w = build_witness(p, s, q, (0,), "max")
        assert dict(w.items()) == {(1, 1): 1, (2, 1): 2, (1, 2): 3, (2, 2): 4}

    def test_invalid_ordering(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["a", "c"])
        with pytest.raises(InvalidPermutation):
            build_witness(p, s, q, (1, 0), "min")

    def test_bad_mode(self):
        p = chain3()
        q = QuerySet(p, ["a"])
        with pytest.raises(ValidationError):
            build_witness(p, ValueScale([1, 2, 3]), q, (0,), "median")


class TestReverseReduce:
    def test_chain_reversed(self):
        p = chain3()
        rp, _, _ = reverse_reduce(p, ValueScale([1, 2, 3]), QuerySet(p, ["a"]))
        assert rp.leq("c", "a")

    def test_scale_negated_and_reversed(self):
        p = chain3()
        _, rs, _ = reverse_reduce(p, ValueScale([1, 2, 3]), QuerySet(p, ["a"]))
        assert rs.values == (Fraction(-3), Fraction(-2), Fraction(-1))

    def test_max_recovered_through_reduction(self):
        p = grid_poset(2, "product")
        s = ValueScale([1, 2, 3, 4])
        q = QuerySet(p, [(1, 2)])
        rp, rs, rq = reverse_reduce(p, s, q)
        assert solve_max(p, s, q).objective == -solve_min(rp, rs, rq).objective
        assert solve_max(p, s, q).objective == 3


class TestChainBounds:
    def test_three_chain_endpoints(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["a", "c"])
        assert chain_bounds(p, s, q) == (4, 4)

    def test_column_formula(self):
        # grid column {(s, v)}_v has min sum s(n+1)/(2n) under the i/n^2 scale
        for n in range(1, 7):
            p = grid_poset(n, "product")
            scale = scale_from_m(MonotoneMap1D.identity(), n)
            for s in range(1, n + 1):
                q = QuerySet(p, [(s, v) for v in range(1, n + 1)])
                mn, _ = chain_bounds(p, scale, q)
                assert mn == Fraction(s * (n + 1), 2 * n)

    def test_singleton(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["b"])
        mn, mx = chain_bounds(p, s, q)
        assert mn == 2 and mx == 2

    def test_query_order_does_not_matter(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        assert chain_bounds(p, s, QuerySet(p, ["c", "a"])) == (4, 4)

    def test_not_a_chain(self):
        p = grid_poset(2, "product")
        s = ValueScale([1, 2, 3, 4])
        with pytest.raises(NotAChain):
            chain_bounds(p, s, QuerySet(p, [(1, 2), (2, 1)]))


class TestDisjointBound:
    def test_antichain(self):
        p = build_poset(["a", "b", "c"], [])
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["a", "b", "c"])
        assert disjoint_bound(p, s, q, "min") == 6
        assert disjoint_bound(p, s, q, "max") == 6

    def test_rows_grid_example(self):
        p = grid_poset(2, "rows")
        s = ValueScale([Fraction(i, 4) for i in range(1, 5)])
        q = QuerySet(p, [(1, 1), (2, 2)])
        assert disjoint_bound(p, s, q, "min") == 1
        assert disjoint_bound(p, s, q, "max") == Fraction(3, 2)

    def test_precondition_violated_reports_pair(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        q = QuerySet(p, ["a", "b"])
        with pytest.raises(PreconditionViolated) as exc:
            disjoint_bound(p, s, q, "min")
        assert set(exc.value.pair) == {"a", "b"}

    def test_bad_mode(self):
        p = chain3()
        with pytest.raises(ValidationError):
            disjoint_bound(p, ValueScale([1, 2, 3]), QuerySet(p, ["a"]), "avg")


class TestScaleFromM:
    def test_identity_scale_is_exact(self):
        s = scale_from_m(MonotoneMap1D.identity(), 2)
        assert s.values == (
            Fraction(1, 4),
            Fraction(2, 4),
            Fraction(3, 4),
            Fraction(1),
        )

    def test_square_map_single_cell(self):
        s = scale_from_m(MonotoneMap1D.power(2), 1)
        assert s.values == (Fraction(1),)

    def test_square_map_two_cells(self):
        import math

        s = scale_from_m(MonotoneMap1D.power(2), 2)
        expected = [0.5, math.sqrt(2) / 2, math.sqrt(3) / 2, 1.0]
        for got, want in zip(s.values, expected):
            assert abs(float(got) - want) < 1e-15

    def test_non_bijection_rejected(self):
        with pytest.raises(ValidationError):
            scale_from_m(MonotoneMap1D.constant(0.5), 2)


class TestMonotoneBijection:
    def test_rank_validation(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        with pytest.raises(ValidationError):
            MonotoneBijection(p, s, [1, 1, 2])
        with pytest.raises(ValidationError):
            MonotoneBijection(p, s, [1, 2])

    def test_dict_construction(self):
        p = chain3()
        s = ValueScale([1, 2, 3])
        f = MonotoneBijection(p, s, {"a": 1, "b": 2, "c": 3})
        assert f.rank("c") == 3 and f.value("a") == 1
