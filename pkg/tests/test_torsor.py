from fractions import Fraction

import pytest

from a3count.number_field import Elem, make_field
from a3count.surface import brute_force_count, height, in_U
from a3count.torsor import (
    EDGES, NONADJACENT, PIC_DEGREES, PSI_EXPONENTS, ClassTuple, class_tuples, count_trend, enumerate_M,
    enumerate_M_normalized, enumerate_M_raw, fiber_census, height_ok, map_to_surface, solve_eta9, torsor_count,
    torsor_heights, torsor_ideals, unit_orbit, verify_point,
)


def test_graph_data():
    assert len(EDGES) == 11
    assert len(NONADJACENT) == 36 - 11
    # the three monomials of the torsor equation are homogeneous of one Picard degree
    mons = ((1, 4, 4, 7), (3, 6, 6, 8), (5, 9))
    degs = [tuple(sum(PIC_DEGREES[j][i] for j in m) for i in range(6)) for m in mons]
    assert degs[0] == degs[1] == degs[2]


def test_psi_monomials_share_degree():
    """All five coordinates of Psi are sections of the same (anticanonical) class."""
    degs = {tuple(sum(k * PIC_DEGREES[j + 1][i] for j, k in enumerate(e)) for i in range(6)) for e in PSI_EXPONENTS}
    assert degs == {(2, 3, 2, 1, 2, 1)}


@pytest.mark.parametrize("d", [-5, -23, -14])
def test_torsor_ideals_consistent(d):
    K = make_field(d)
    tuples = class_tuples(K)
    assert len(tuples) == K.h ** 6
    for C in tuples[:: max(1, len(tuples) // 50)]:
        O = torsor_ideals(K, C)
        assert O[1] * O[4] ** 2 * O[7] == O[5] * O[9]
        # u_C is the norm of C0^3 / (C1 ... C5)
        reps = [K.class_reps[i] for i in C.idx]
        assert C.u == (reps[0] ** 3 / (reps[1] * reps[2] * reps[3] * reps[4] * reps[5])).norm


@pytest.mark.parametrize("d,B", [("Q", 20), (-1, 10), (-3, 4), (-5, 10)])
def test_enumerated_points_satisfy_definition(d, B):
    K = make_field(d)
    images = set()
    for C in class_tuples(K):
        for tp in enumerate_M_normalized(K, C, B):
            assert verify_point(K, C, tp, B) == []
            p = map_to_surface(K, tp)
            assert in_U(p)
            assert height(K, p).value <= B
            images.add(p.key())
    # distinct normalized points give distinct points of U
    assert len(images) == torsor_count(K, B).count


@pytest.mark.parametrize("d,B", [("Q", 50), (-1, 10), (-3, 10), (-5, 10)])
def test_count_matches_brute_force(d, B):
    K = make_field(d)
    assert torsor_count(K, B).count == brute_force_count(K, B).count


@pytest.mark.parametrize("d,B", [("Q", 20), (-5, 4)])
def test_raw_enumeration_equals_orbit_expansion(d, B):
    K = make_field(d)
    w6 = K.units_count ** 6
    total = 0
    for C in class_tuples(K):
        raw = enumerate_M_raw(K, C, B)
        full = enumerate_M(K, C, B)
        assert [p.key() for p in raw] == [p.key() for p in full]
        total += len(raw)
    assert total % w6 == 0
    assert total // w6 == brute_force_count(K, B).count


def test_unit_orbit_size(Qi):
    C = class_tuples(Qi)[0]
    tp = enumerate_M_normalized(Qi, C, 4)[0]
    orb = unit_orbit(Qi, tp.eta)
    assert len({tuple(e.key() for e in o) for o in orb}) == 4 ** 6
    # every orbit point has the same image
    keys = {map_to_surface(Qi, o).key() for o in orb[:200]}
    assert len(keys) == 1


def test_height_conditions_match_surface_height(QQ, Qi):
    for K, B in ((QQ, 30), (Qi, 10)):
        hs = torsor_heights(K, B)
        assert hs == brute_force_count(K, B).heights()


def test_trend_monotone(QQ):
    rows = count_trend(QQ, [1, 2, 4, 10, 20, 50])
    assert [n for _, n in rows] == [2, 8, 26, 106, 316, 1290]


def test_fiber_census_small():
    for d, B in (("Q", 20), (-5, 10), (-1, 2)):
        K = make_field(d)
        cen = fiber_census(K, B)
        assert cen["sizes"] == {K.units_count ** 6: torsor_count(K, B).count}


def test_solve_eta9_and_height_ok(QQ):
    C = class_tuples(QQ)[0]
    O = torsor_ideals(QQ, C)
    one = Elem(QQ, 1)
    e9 = solve_eta9(QQ, one, one, one, one, one, one, one, O[9])
    assert e9 == Elem(QQ, -2)
    assert height_ok(QQ, [one] * 8, 2)
    assert not height_ok(QQ, [one] * 8, Fraction(3, 2))
    with pytest.raises(ValueError):
        height_ok(QQ, [one] * 4 + [Elem(QQ, 0)] + [one] * 3, 5)


def test_class_tuple_render():
    assert ClassTuple((0, 1, 0, 0, 1, 0), Fraction(1)).to_str() == "(0,1,0,0,1,0)"
