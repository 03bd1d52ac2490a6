import math
from fractions import Fraction

import numpy as np
import pytest

from a3count.constant import (
    TAIL_K, alpha_closed_form, alpha_montecarlo, alpha_polytope, alpha_volume, assemble_constant, euler_factor,
    euler_factor_exact, euler_product, omega_infinity, omega_inner_box, polytope_volume, prefactor, prime_norms,
    theta8_average_identity, theta8_local,
)


def test_euler_first_factor(QQ):
    e = euler_product(QQ, 2)
    assert euler_factor_exact(Fraction(1, 2)) == Fraction(17, 256)
    assert math.isclose(e.value, 17 / 256)
    assert e.lower < e.value == e.upper


def test_euler_gaussian_small(Qi):
    assert sorted(prime_norms(Qi, 5)) == [2, 5, 5, 9]
    want = math.prod(euler_factor(1 / q) for q in (2, 5, 5, 9))
    assert math.isclose(euler_product(Qi, 5).value, want)
    with pytest.raises(ValueError):
        euler_product(Qi, 1)


def test_euler_brackets_nest(anyfield):
    K = anyfield
    a, b = euler_product(K, 10_000), euler_product(K, 20_000)
    assert a.contains(b)
    assert a.lower <= b.value <= a.upper
    assert abs(a.value - euler_product(K, 100_000).value) < 1e-3


def test_factor_bounds_on_grid():
    x = np.linspace(1e-6, 0.5, 20001)
    f = (1 - x) ** 6 * (1 + 6 * x + x * x)
    assert np.all(f <= 1)
    assert np.all(f >= np.exp(-TAIL_K * x * x))


def test_theta8_identity():
    res = theta8_average_identity()
    assert res.equal
    assert res.lhs[1] == 0
    assert [int(c) for c in res.lhs] == [1, 0, -20, 64, -90, 64, -20, 0, 1]


def test_theta8_local_values():
    assert theta8_local(()) == [1]
    assert theta8_local({2}) == [1, -2]
    assert theta8_local({1, 3}) == [0]
    assert theta8_local({4, 7}) == [1, -1]


def test_alpha_exact():
    assert alpha_volume() == Fraction(1, 4320) == alpha_closed_form()


def test_polytope_volume_unit_simplex():
    A = [[Fraction(1)] * 3] + [[Fraction(-1 if i == j else 0) for j in range(3)] for i in range(3)]
    b = [Fraction(1)] + [Fraction(0)] * 3
    assert polytope_volume(A, b) == Fraction(1, 6)
    with pytest.raises(ValueError):
        polytope_volume(A + [[Fraction(0), Fraction(0), Fraction(1)]], b + [Fraction(0)])


def test_alpha_polytope_shape():
    rows, rhs, cr = alpha_polytope()
    assert len(rows[0]) == 5
    assert all(r >= 0 for r in rhs)
    assert cr > 0


def test_alpha_montecarlo():
    v, err = alpha_montecarlo(400_000, seed=2)
    exact = 1 / 4320
    assert abs(v - exact) <= 4 * err
    assert abs(v - exact) / exact < 0.02
    assert alpha_montecarlo(50_000, seed=5) == alpha_montecarlo(50_000, seed=5)


def test_omega_real_routes(QQ):
    q = omega_infinity(QQ, "quad")
    m = omega_infinity(QQ, "mc", 400_000, 1)
    c = omega_infinity(QQ, "cubature")
    assert math.isclose(q.value, 31.5217326, rel_tol=1e-7)
    assert abs(q.value - c.value) <= 3 * (q.err + c.err) + 1e-6
    assert abs(q.value - m.value) <= 4 * (q.err + m.err)
    assert q.value > omega_inner_box(QQ)


def test_omega_complex_routes(Qi):
    q = omega_infinity(Qi, "quad")
    m = omega_infinity(Qi, "mc", 400_000, 3)
    assert abs(q.value - m.value) <= 4 * (q.err + m.err)
    assert abs(q.value - m.value) / q.value < 0.01
    assert q.value > omega_inner_box(Qi)
    with pytest.raises(ValueError):
        omega_infinity(Qi, "cubature")


def test_mc_deterministic(QQ):
    a = omega_infinity(QQ, "mc", 100_000, 7)
    b = omega_infinity(QQ, "mc", 100_000, 7)
    assert a == b


def test_prefactor(QQ, Qi, Q5):
    assert prefactor(QQ) == (1.0, "1")
    val, s = prefactor(Qi)
    assert s == "(2*pi)^6*1/1048576"
    assert math.isclose(val, (2 * math.pi) ** 6 / 1048576)
    # h = 2, Delta = -20, omega = 2
    assert prefactor(Q5)[1] == "(2*pi)^6*1/160000"


def test_assemble(QQ):
    c = assemble_constant(QQ, P=10_000, mc_samples=200_000, cross_check=True)
    assert c.alpha == Fraction(1, 4320)
    assert set(c.checks) == {"mc", "cubature"}
    assert all(ch["rel_diff"] < 0.01 for ch in c.checks.values())
    assert math.isclose(c.c_value, float(c.alpha) * c.euler.value * c.omega_inf.value)
    assert 0 < c.c_err < 1e-2 * c.c_value
