import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from a3count.lattice import (
    Constraint, Region, count_in_region, davenport_main_term, davenport_sweep, disc_region,
    enumerate_in_disc, enumerate_pairs, fitted_constants, ideal_lattice, region_area,
)
from a3count.number_field import Elem, enumerate_ideals, make_field


def brute_disc(ctx, I, center, T):
    """Points of I with N(x - center) <= T by scanning a generous box of HNF coordinates."""
    a, b, c = I.hnf
    D = I.den
    R = math.isqrt(int(4 * T * D * D) + 4) + 2
    out = set()
    span = R + 2 if not ctx.rational else int(T * D) + 2
    for k in range(-span, span + 1) if not ctx.rational else (0,):
        for m in range(-span, span + 1):
            x = Elem(ctx, m * a + k * b, k * c, D)
            if (x - center).norm() <= T:
                out.add(x.key())
    return out


def test_unit_disc_gaussian(Qi):
    L = ideal_lattice(Qi, Qi.unit_ideal)
    assert len(enumerate_in_disc(L, radius=1)) == 5
    assert len(enumerate_in_disc(L, norm_bound=2)) == 9


def test_off_centre_disc_empty(Qi):
    L = ideal_lattice(Qi, Qi.unit_ideal)
    c = Elem(Qi, 1, 1, 2)
    assert enumerate_in_disc(L, c, norm_bound=Fraction(1, 4)) == []
    assert len(enumerate_in_disc(L, c, norm_bound=Fraction(1, 2))) == 4


def test_radius_ten_count(Qi):
    L = ideal_lattice(Qi, Qi.unit_ideal)
    n = len(enumerate_in_disc(L, radius=10))
    assert n == 317
    assert abs(n - davenport_main_term(math.pi * 100, L)) < 10


@pytest.mark.parametrize("d", [-1, -3, -5, -23, "Q"])
def test_enumeration_matches_box_scan(d):
    K = make_field(d)
    ideals = enumerate_ideals(K, 12)
    for I in ideals[:: max(1, len(ideals) // 5)]:
        J = I * K.ideal(Elem(K, 1, 0, 2))
        for center, T in ((K.zero, Fraction(30)), (Elem(K, 1, 0 if K.rational else 2, 3), Fraction(17, 2))):
            L = ideal_lattice(K, J)
            got = {x.key() for x in enumerate_in_disc(L, center, norm_bound=T)}
            assert got == brute_disc(K, J, center, T)


def test_translated_lattice(Qi):
    I = Qi.ideal(Elem(Qi, 2, 1))
    beta = Elem(Qi, 1, 0)
    L = ideal_lattice(Qi, I, beta)
    pts = enumerate_in_disc(L, norm_bound=40)
    assert pts and all((x - beta) in I for x in pts)


def test_region_counts_and_area(Qi):
    L = ideal_lattice(Qi, Qi.unit_ideal)
    disc = disc_region(Qi, 100)
    assert count_in_region(L, disc) == 317
    # |z + i| <= |z - i| is the closed lower half-plane; 21 points lie on the real axis
    half = Region(disc.constraints + [Constraint((Elem(Qi, 0, 1), Qi.one), (Elem(Qi, 0, -1), Qi.one))], disc.cover)
    assert count_in_region(L, half) == (317 + 21) // 2
    area, err = region_area(Qi, disc, "montecarlo", 200_000, seed=1)
    assert abs(area - 100 * math.pi) <= err
    area, err = region_area(Qi, disc, "grid", step=0.05)
    assert abs(area - 100 * math.pi) <= err


def test_region_needs_cover(Qi):
    L = ideal_lattice(Qi, Qi.unit_ideal)
    with pytest.raises(ValueError):
        count_in_region(L, Region([Constraint((Qi.zero, Qi.one), (Qi.one,))]))


def test_determinant(Qi, Q5):
    for K in (Qi, Q5):
        for I in enumerate_ideals(K, 30):
            L = ideal_lattice(K, I)
            assert math.isclose(L.det, 0.5 * math.sqrt(-K.disc) * float(I.norm))


@settings(max_examples=40, deadline=None)
@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(1, 7), st.integers(1, 400))
def test_disc_count_symmetric_under_units(a, b, den, T):
    """Multiplying by a unit maps I to itself, so counts around c and u c agree."""
    K = make_field(-1)
    I = K.ideal(Elem(K, 3, 1))
    L = ideal_lattice(K, I)
    c = Elem(K, a, b, den)
    n0 = len(enumerate_pairs(L, c, norm_bound=T))
    n1 = len(enumerate_pairs(L, c * Elem(K, 0, 1), norm_bound=T))
    assert n0 == n1


def test_davenport_sweep_shape():
    fields = [make_field(d) for d in (-1, -5)]
    rec = davenport_sweep(fields, n_ideals=4, radii=(10, 20), seed=3)
    assert len(rec) == 8
    C = fitted_constants(rec)
    assert set(C) == {10, 20}
    assert all(r.count > 0 for r in rec)
