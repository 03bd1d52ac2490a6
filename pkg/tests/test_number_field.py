import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from a3count.number_field import (
    Elem, enumerate_ideals, euler_phi, factor_ideal, is_prime, kronecker, make_field, mobius,
    omega_count, parse_ideal, phi_star, primes_up_to, split_prime, tau,
)

FIELDS = {d: make_field(d) for d in ("Q", -1, -2, -3, -5, -6, -14, -23, -47)}

# class numbers from standard tables
KNOWN_H = {-1: 1, -2: 1, -3: 1, -5: 2, -6: 2, -14: 4, -23: 3, -47: 5}
KNOWN_UNITS = {-1: 4, -2: 2, -3: 6, -5: 2}


def ints(m=30):
    return st.integers(-m, m)


def elems(ctx, m=30, den=6):
    return st.builds(lambda a, b, d: Elem(ctx, a, 0 if ctx.rational else b, d), ints(m), ints(m), st.integers(1, den))


def nonzero(ctx, m=30, den=6):
    return elems(ctx, m, den).filter(lambda x: not x.is_zero())


@pytest.mark.parametrize("d,h", KNOWN_H.items())
def test_class_numbers(d, h):
    assert make_field(d).h == h


@pytest.mark.parametrize("d,w", KNOWN_UNITS.items())
def test_unit_counts(d, w):
    K = make_field(d)
    assert K.units_count == w
    assert all(Elem(K, *u).norm() == 1 for u in K.units)


def test_invalid_fields():
    for d in (-4, -12, 0, 5):
        with pytest.raises(ValueError):
            make_field(d)


def test_discriminants():
    assert make_field(-1).disc == -4
    assert make_field(-3).disc == -3
    assert make_field(-5).disc == -20
    assert make_field("Q").disc == 1


def test_rho():
    assert math.isclose(make_field(-1).rho, math.pi / 4)
    assert math.isclose(make_field(-5).rho, math.pi / math.sqrt(20))
    assert make_field("Q").rho == 1.0


def test_small_primes():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert all(is_prime(p) == (p in primes_up_to(200)) for p in range(200))
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)


@pytest.mark.parametrize("d", [-1, -2, -3, -5, -23])
def test_split_prime_types(d):
    K = FIELDS[d]
    for p in primes_up_to(60):
        P = split_prime(K, p)
        k = kronecker(K.disc, p)
        assert {1: 2, 0: 1, -1: 1}[k] == len(P)
        # N(p O_K) = p^2 is the product of the prime norms with ramification
        total = sum(Q.f * (2 if Q.ramified else 1) for Q in P)
        assert total == 2
        prod = K.unit_ideal
        for Q in P:
            prod = prod * Q.ideal ** (2 if Q.ramified else 1)
        assert prod == K.ideal(p)


def test_gaussian_splitting_examples():
    K = FIELDS[-1]
    assert [(P.norm, P.ramified) for P in split_prime(K, 2)] == [(2, True)]
    assert [P.norm for P in split_prime(K, 5)] == [5, 5]
    assert [P.norm for P in split_prime(K, 3)] == [9]


def _chi(D, m):
    """Kronecker symbol (D/m), extended multiplicatively from primes."""
    out, p = 1, 2
    while m > 1:
        while m % p == 0:
            out *= kronecker(D, p)
            m //= p
        p += 1
    return out


@pytest.mark.parametrize("d", [-1, -3, -5, -23])
def test_ideal_counts_match_dedekind_coefficients(d):
    """#{a : N a = n} = sum_{m | n} chi(m), an oracle independent of the enumeration."""
    K = FIELDS[d]
    t = 400
    counts = [0] * (t + 1)
    for I in enumerate_ideals(K, t):
        counts[int(I.norm)] += 1
    for n in range(1, t + 1):
        assert counts[n] == sum(_chi(K.disc, m) for m in range(1, n + 1) if n % m == 0), n


def test_ideals_norm_le_5_gaussian():
    norms = sorted(int(I.norm) for I in enumerate_ideals(FIELDS[-1], 5))
    assert norms == [1, 2, 4, 5, 5]


@pytest.mark.parametrize("d", [-5, -23])
def test_class_filter_partitions(d):
    K = FIELDS[d]
    allI = enumerate_ideals(K, 200)
    parts = [enumerate_ideals(K, 200, cls=k) for k in range(K.h)]
    assert sum(map(len, parts)) == len(allI)
    for k, part in enumerate(parts):
        assert all(I.class_index() == k for I in part)


def test_divisor_functions_gaussian():
    K = FIELDS[-1]
    six = K.ideal(6)
    # (6) = (1+i)^2 (3)
    assert tau(six) == 6
    assert mobius(six) == 0
    assert omega_count(six) == 2
    assert euler_phi(K.ideal(5)) == 16
    assert phi_star(K.ideal(5)) == Fraction(16, 25)
    assert mobius(K.ideal(Elem(K, 1, 1))) == -1


def _phi_brute(K, I):
    """Size of (O/I)^x by listing residues."""
    a, b, c = I.hnf
    count = 0
    for x in range(a):
        for y in range(c):
            e = Elem(K, x, y)
            if not e.is_zero() and (K.ideal(e) + I).is_unit():
                count += 1
    return count


@pytest.mark.parametrize("d", [-1, -5])
def test_euler_phi_against_residues(d):
    K = FIELDS[d]
    for I in enumerate_ideals(K, 30)[1:]:
        assert euler_phi(I) == _phi_brute(K, I), I.to_str()


def test_parse_roundtrip():
    K = FIELDS[-5]
    for I in enumerate_ideals(K, 50):
        J = I * K.ideal(Elem(K, 1, 2, 3))
        assert parse_ideal(K, J.to_str()) == J


def test_rational_degenerate():
    Q = FIELDS["Q"]
    assert Elem(Q, -6).norm() == 6
    assert Q.ideal(6, 10) == Q.ideal(2)
    assert [int(I.norm) for I in enumerate_ideals(Q, 6)] == [1, 2, 3, 4, 5, 6]


# ---------------------------------------------------------------------------
# properties


@pytest.mark.parametrize("d", [-1, -3, -7, "Q"])
def test_elem_arithmetic_matches_complex(d):
    K = make_field(d)

    @settings(max_examples=150, deadline=None)
    @given(elems(K), nonzero(K))
    def check(x, y):
        for got, want in ((x + y, complex(x) + complex(y)), (x * y, complex(x) * complex(y)),
                          (x / y, complex(x) / complex(y))):
            assert cmath.isclose(complex(got), want, rel_tol=1e-9, abs_tol=1e-9)
        assert (x * y).norm() == x.norm() * y.norm()

    check()


@pytest.mark.parametrize("d", [-1, -5, -23, -14])
def test_ideal_group_laws(d):
    K = FIELDS[d]

    @settings(max_examples=60, deadline=None)
    @given(st.lists(nonzero(K), min_size=1, max_size=3), st.lists(nonzero(K), min_size=1, max_size=3))
    def check(g1, g2):
        I, J = K.ideal(*g1), K.ideal(*g2)
        assert (I * I.inv()).is_unit()
        assert (I * J).norm == I.norm * J.norm
        assert (I * J) / J == I
        # the class map is a homomorphism onto a group of order h
        if K.h > 1:
            prod = K.class_reps[I.class_index()] * K.class_reps[J.class_index()]
            assert prod.class_index() == (I * J).class_index()
        # principal ideals land in the trivial class
        assert K.ideal(g1[0]).class_index() == 0

    check()


@pytest.mark.parametrize("d", [-1, -5, -23])
def test_factorization_reconstructs(d):
    K = FIELDS[d]

    @settings(max_examples=60, deadline=None)
    @given(st.lists(nonzero(K, 40, 1), min_size=1, max_size=2))
    def check(gens):
        I = K.ideal(*gens)
        fac = factor_ideal(I)
        assert fac.product(K) == I
        assert math.prod(q ** e for q, e in fac.prime_norms()) == I.norm

    check()
