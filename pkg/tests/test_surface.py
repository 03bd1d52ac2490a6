import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from a3count.number_field import Elem, make_field
from a3count.surface import (
    LINES, SINGULAR_POINT, ProjPoint5, brute_force_count, certified_radius, height, in_U, lines_through,
    on_line, on_surface, psi,
)


def P(ctx, *xs):
    return ProjPoint5.make(ctx, xs)


def test_known_heights(QQ, Qi):
    p = P(QQ, 1, 1, 1, 1, -2)
    assert on_surface(p) and in_U(p)
    assert height(QQ, p).value == 2
    assert height(Qi, P(Qi, 1, 1, 1, 1, -2)).value == 4
    # scaling by 1/2 leaves the height unchanged
    q = P(QQ, 2, 2, 2, 2, -4)
    assert height(QQ, q).value == 2 and q == p


def test_lines_and_singular_point(QQ):
    s = P(QQ, *SINGULAR_POINT)
    assert on_surface(s)
    # exactly the lines leaving x4 free pass through (0:0:0:0:1)
    assert set(lines_through(s)) == {k for k, line in enumerate(LINES) if 4 not in line}
    assert len(lines_through(s)) == 3
    for k, line in enumerate(LINES):
        free = [i for i in range(5) if i not in line]
        xs = [0] * 5
        # generic point of the line: the free coordinates satisfy the linear relations
        for vals in itertools.product(range(-3, 4), repeat=len(free)):
            for i, v in zip(free, vals):
                xs[i] = v
            if any(xs):
                p = P(QQ, *xs)
                if on_surface(p):
                    assert on_line(p) is not None


def test_off_surface_rejected(QQ):
    with pytest.raises(ValueError):
        on_line(P(QQ, 1, 2, 3, 4, 5))


@pytest.mark.parametrize("d", ["Q", -1, -3, -5])
def test_psi_lands_on_surface(d):
    K = make_field(d)

    @settings(max_examples=120, deadline=None)
    @given(st.tuples(*[st.tuples(st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 5))] * 3))
    def check(ys):
        y = [Elem(K, a, 0 if K.rational else b, den) for a, b, den in ys]
        if any(v.is_zero() for v in y):
            return
        p = psi(K, *y)
        assert on_surface(p)
        # y0 y1 y2 (y0 + y1) != 0 keeps the image off the lines
        if not (y[0] + y[1]).is_zero():
            assert in_U(p)

    check()


@pytest.mark.parametrize("d", ["Q", -1, -5])
def test_height_scaling_property(d):
    K = make_field(d)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(-9, 9), min_size=6, max_size=6), st.integers(1, 30), st.integers(-30, 30),
           st.integers(1, 9))
    def check(v, la, lb, lden):
        y = [Elem(K, v[2 * i], 0 if K.rational else v[2 * i + 1]) for i in range(3)]
        if any(t.is_zero() for t in y):
            return
        p = psi(K, *y)
        lam = Elem(K, la, 0 if K.rational else lb, lden)
        assert height(K, p).value == height(K, p.scale(lam)).value

    check()


def naive_count(ctx, B, box):
    """Points of U with H <= B from all 5-tuples of elements of norm <= box (class number one only)."""
    assert ctx.h == 1
    elems = [(a, b) for a in range(-box, box + 1) for b in (range(-box, box + 1) if not ctx.rational else (0,))
             if 0 < ctx.norm_form(a, b) <= box] + [(0, 0)]
    seen = set()
    mul = ctx.mul_pair
    for x0, x2, x3 in itertools.product(elems, repeat=3):
        for x1 in elems:
            if mul(x0, x1) != mul(x2, x3):
                continue
            for x4 in elems:
                s = tuple(p + q + r for p, q, r in zip(mul(x0, x3), mul(x1, x3), mul(x2, x4)))
                if s != (0, 0) or not any(map(any, (x0, x1, x2, x3, x4))):
                    continue
                p = ProjPoint5.make(ctx, (x0, x1, x2, x3, x4))
                if in_U(p) and height(ctx, p).value <= B:
                    seen.add(p.key())
    return len(seen)


@pytest.mark.parametrize("d,B,expected", [("Q", 1, 2), ("Q", 2, 8), ("Q", 4, 26), ("Q", 10, 106), (-1, 2, 28), (-1, 4, 84), (-3, 4, 72)])
def test_brute_force_against_naive(d, B, expected):
    K = make_field(d)
    assert naive_count(K, B, int(B)) == expected
    assert brute_force_count(K, B).count == expected


@pytest.mark.parametrize("d,B", [("Q", 10), ("Q", 20), (-1, 4), (-3, 4), (-5, 10)])
def test_psi_and_direct_modes_agree(d, B):
    K = make_field(d)
    a = brute_force_count(K, B, mode="psi")
    b = brute_force_count(K, B, mode="direct")
    assert a.count == b.count
    assert set(a.points) == set(b.points)
    assert a.stabilized and a.certified


def test_brute_points_are_valid(Q5):
    r = brute_force_count(Q5, 10)
    for p, h in r.points.values():
        assert in_U(p) and h.value <= 10 and height(Q5, p).value == h.value


def test_certified_radius(QQ, Q5):
    assert certified_radius(QQ, 7) == 7
    assert certified_radius(Q5, 7) == 14


def test_negative_bound(QQ):
    with pytest.raises(ValueError):
        brute_force_count(QQ, -1)
    assert brute_force_count(QQ, Fraction(1, 2)).count == 0
