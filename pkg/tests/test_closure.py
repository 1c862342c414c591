import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from packclosure import packset
from packclosure.closure import (
    ALL_POSITIVE,
    TRUNCATED,
    aggregate,
    closure,
    closure_inf,
    closure_k,
    closure_k_downset,
    closure_monotonicity,
    family_closure,
    global_box,
    lambda_cells,
    verify_closure,
)
from packclosure.downset import DownsetModel, PackingPolyhedron, polyhedron_integer_hull
from packclosure.kernel.polyhedra import HPolyhedron, h_to_v, poly_contains, poly_equal
from packclosure.packset import INF, PackingSet, canonicalize

from oracles import random_positive_instance

TWO_BY_TWO = PackingPolyhedron(((2, 1), (1, 2)), (2, 2))


def box(*u):
    n = len(u)
    return PackingPolyhedron(tuple(tuple(1 if i == j else 0 for i in range(n)) for j in range(n)), u)


def H(A, b):
    return HPolyhedron.from_rows(A, b)


def test_aggregate():
    k = aggregate(TWO_BY_TWO, (1, 1))
    assert k.c == (3, 3) and k.d == 4
    k = aggregate(TWO_BY_TWO, (1, 0))
    assert k.c == (2, 1) and k.d == 2
    k = aggregate(TWO_BY_TWO, (F(1, 2), F(1, 2)))
    assert k.c == (F(3, 2), F(3, 2)) and k.d == 2
    assert set(packset.from_knapsack(k).generators) == {(1, 0), (0, 1)}


def test_global_box():
    assert global_box(TWO_BY_TWO) == (2, 2)
    assert global_box(PackingPolyhedron(((1, 1),), (3,))) == (3, 3)
    assert global_box(box(1, 1)) is None


def test_lambda_cells_two_by_two():
    fam = lambda_cells(TWO_BY_TWO, (2, 2), minimal=False)
    assert canonicalize([(1, 0), (0, 1)]) in fam.sets
    minimal = lambda_cells(TWO_BY_TWO, (2, 2))
    assert minimal.sets == [canonicalize([(1, 0), (0, 1)])]
    # the row sets enter through the boundary multipliers
    res = closure_k(TWO_BY_TWO, 1)
    assert res.family.sets == [canonicalize([(1, 0), (0, 1)])]


def test_lambda_cells_single_row_and_duplicate_rows():
    P = PackingPolyhedron(((2, 3),), (7,))
    fam = lambda_cells(P, (3, 2), minimal=False)
    assert len(fam.reps) == 1 and fam.reps[0].multiplier == (1,)
    assert fam.sets[0] == packset.from_knapsack(aggregate(P, (1,)))
    Q = PackingPolyhedron(((2, 3), (2, 3)), (7, 7))
    assert len(lambda_cells(Q, (3, 2), minimal=False).reps) == 1


def test_closure_two_by_two():
    res = closure_k(TWO_BY_TWO, 1)
    assert res.exact and res.certificate == ALL_POSITIVE
    assert poly_equal(res.hull.to_h(), H([[1, 1]], [1]))
    assert poly_equal(res.hull.to_h(), polyhedron_integer_hull(TWO_BY_TWO).to_h())
    assert closure_k(TWO_BY_TWO, 2).hull == res.hull


def test_closure_zero_column():
    P = PackingPolyhedron(((1, 0),), (1,))
    res = closure_k(P, 1)
    assert res.exact
    assert poly_equal(res.hull.to_h(), H([[1, 0]], [1]))
    assert h_to_v(res.hull.to_h()).rays == ((0, 1),)


def test_truncated_result():
    P = PackingPolyhedron(((1, 2), (3, 0)), (4, 5))
    res = closure_k(P, 1, (4, 4))
    assert not res.exact and res.certificate == TRUNCATED
    assert res.truncation_box == (4, 4)
    assert verify_closure(res, P, samples=100).passed


def test_downset_box_is_its_own_closure():
    D = DownsetModel.single(box(1, 2))
    res = closure_k_downset(D, 1, (1, 2))
    assert poly_equal(res.hull.to_h(), box(1, 2).to_h())


def test_downset_union_of_boxes():
    D = DownsetModel(2, (box(1, 2), box(2, 1)))
    res = closure(D, 1)
    inf = closure_inf(D)
    H_ = res.hull.to_h()
    assert poly_contains(H_, h_to_v(inf.hull.to_h()))
    assert poly_contains(box(2, 2).to_h(), h_to_v(H_))
    assert verify_closure(res, D, samples=100).passed


def test_downset_single_piece_matches_polyhedral_path():
    rng = random.Random(9)
    for _ in range(8):
        P = random_positive_instance(rng, 2, rng.randint(1, 2))
        a = closure_k(P, 1)
        D = DownsetModel.single(P)
        assert closure_k_downset(D, 1) == a
        # the direction arrangement, forced, lands on the same polyhedron
        b = closure_k_downset(D, 1, (6, 6), use_aggregations=False)
        assert poly_equal(a.hull.to_h(), b.hull.to_h())


def test_closure_inf_examples():
    assert poly_equal(closure_inf(TWO_BY_TWO).hull.to_h(), polyhedron_integer_hull(TWO_BY_TWO).to_h())
    D = DownsetModel(2, (box(1, 2), box(2, 1)))
    expected = HPolyhedron.from_rows([[1, 0], [0, 1], [1, 1]], [2, 2, 3])
    assert poly_equal(closure_inf(D).hull.to_h(), expected)
    assert poly_equal(closure_inf(box(1, 1)).hull.to_h(), box(1, 1).to_h())


def test_family_closure_empty_member():
    assert family_closure([PackingSet(2), canonicalize([(1, 1)])], 1, 2) is None


def test_verify_two_by_two_and_corruption():
    res = closure_k(TWO_BY_TWO, 1)
    assert verify_closure(res, TWO_BY_TWO, samples=200).passed
    bad = replace(res, hull=PackingPolyhedron(((1, 1),), (F(1, 2),)))
    report = verify_closure(bad, TWO_BY_TWO, samples=20)
    assert not report.checks["c_sandwich"]
    assert any(v["witness"] is not None for v in report.violations)


def test_verify_flags_empty_result():
    res = closure_k(TWO_BY_TWO, 1)
    empty = replace(res, hull=None, empty=True)
    assert not verify_closure(empty, TWO_BY_TWO).passed


def test_monotonicity():
    rep = closure_monotonicity(TWO_BY_TWO, 3)
    assert rep["holds"] and rep["first_repeat"] == 1
    single = PackingPolyhedron(((2, 3),), (7,))
    rep = closure_monotonicity(single, 3)
    hulls = [r.hull for r in rep["results"]]
    assert hulls[0] == hulls[1] == hulls[2]
    rng = random.Random(13)
    for _ in range(20):
        assert closure_monotonicity(random_positive_instance(rng, 2, 3), 2)["holds"]


def test_k_must_be_positive():
    with pytest.raises(ValueError):
        closure_k(TWO_BY_TWO, 0)


def test_slot_monotonicity():
    from oracles import random_packing_set

    rng = random.Random(31)
    for _ in range(40):
        s = random_packing_set(rng, 2, cmax=5, gens=3, inf_prob=0.1)
        t = random_packing_set(rng, 2, cmax=5, gens=3, inf_prob=0.1)
        sub = s & random_packing_set(rng, 2, cmax=5, gens=3, inf_prob=0.1)
        if sub.is_empty or t.is_empty:
            continue
        big = family_closure([s, t], 2, 2)
        small = family_closure([sub, t], 2, 2)
        assert poly_contains(big, h_to_v(small))


def test_closure_hulls_are_packing_polyhedra():
    from packclosure.downset import normalize_downset

    rng = random.Random(32)
    for _ in range(15):
        P = random_positive_instance(rng, rng.randint(1, 3), rng.randint(1, 3))
        for k in (1, 2):
            hull = closure_k(P, k).hull.to_h()
            assert poly_equal(normalize_downset(hull).to_h(), hull)
