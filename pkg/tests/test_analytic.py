import math

import pytest

from a3count.analytic import (
    ONE, PHI_STAR, average_euler, average_mobius, average_value_check, decay_exponent, deviation_profile, get_spec,
    ideal_density_check, ideal_table, omega_sum_report, theta8_closed_average, theta8_rule_average,
)
from a3count.number_field import enumerate_ideals, phi_star


def gauss_ideal_count(t):
    """Ideals of Z[i] with norm <= t: nonzero lattice points in the disc, one per unit orbit."""
    r = math.isqrt(t)
    pts = sum(2 * math.isqrt(t - a * a) + 1 for a in range(-r, r + 1)) - 1
    return pts // 4


@pytest.mark.parametrize("t", [1, 2, 10, 1000, 54321])
def test_gaussian_count_oracle(Qi, t):
    rep = ideal_density_check(Qi, t)
    assert rep.rows[-1].lhs == gauss_ideal_count(t)


def test_density_converges(Qi, Q5):
    r = ideal_density_check(Qi, 200_000).rows[-1]
    assert abs(r.ratio - 1) < 1e-3
    rep = ideal_density_check(Q5, 100_000)
    assert len(rep.rows) == 3
    for row in rep.rows[:2]:
        assert abs(row.lhs / (row.t * Q5.rho) - 1) < 5e-3
    assert rep.rows[2].lhs == rep.rows[0].lhs + rep.rows[1].lhs


def test_small_t(QQ, Qi):
    assert ideal_density_check(Qi, 1).rows[-1].lhs == 1
    assert ideal_density_check(QQ, 1).rows[-1].lhs == 1
    with pytest.raises(ValueError):
        ideal_density_check(Qi, 0)


def test_one_spec_matches_density(Q5):
    a = average_value_check(Q5, ONE, 5000)
    b = ideal_density_check(Q5, 5000)
    assert [r.lhs for r in a.rows] == [r.lhs for r in b.rows]
    assert math.isclose(average_euler(Q5, ONE, 1000).value, 1.0, rel_tol=1e-12)


def test_phi_star_sum_against_direct(Q5):
    t = 300
    direct = sum(float(phi_star(I)) for I in enumerate_ideals(Q5, t))
    rep = average_value_check(Q5, PHI_STAR, t)
    assert math.isclose(rep.rows[-1].lhs, direct, rel_tol=1e-12)


@pytest.mark.parametrize("d", ["Q", -1, -5])
def test_average_two_routes(d):
    from a3count.number_field import make_field
    K = make_field(d)
    e = average_euler(K, PHI_STAR, 100_000)
    m = average_mobius(K, PHI_STAR, 50_000)
    assert e.lower <= e.value <= e.upper
    assert max(e.lower, m.lower) <= min(e.upper, m.upper)


def test_phi_star_average_over_q_is_inverse_zeta2(QQ):
    e = average_euler(QQ, PHI_STAR, 100_000)
    assert e.lower <= 6 / math.pi ** 2 <= e.upper


def test_theta8_rule_vs_closed(Qi, Q5):
    for K in (Qi, Q5):
        assert math.isclose(theta8_rule_average(K, 2000), theta8_closed_average(K, 2000), rel_tol=1e-12)


def test_deviation_decay(Qi):
    prof = deviation_profile(Qi, PHI_STAR, [10_000, 40_000])
    e = decay_exponent(prof)
    # t^(-1/2) is the lattice-point rate; allow a factor of two in the ratio
    want = 4 ** -0.5
    ratio = prof[1][1] / prof[0][1]
    assert want / 2 <= ratio <= want * 2
    assert e < 0


def test_omega_sums(Qi):
    rows0 = omega_sum_report(Qi, 0, [1000, 100_000])
    for r in rows0:
        assert r.lhs == gauss_ideal_count(r.t)
    assert abs(rows0[-1].ratio - Qi.rho) < 1e-2
    rows1 = omega_sum_report(Qi, 1, [1000, 10_000, 100_000])
    ratios = [r.ratio for r in rows1]
    assert max(ratios) / min(ratios) < 1.5
    assert omega_sum_report(Qi, 2, [1])[0].rhs == 1.0


def test_table_slicing(Q5):
    big = ideal_table(Q5, 2000)
    small = ideal_table(Q5, 500)
    assert len(small.norm) == sum(1 for n in big.norm if n <= 500)


def test_csv_and_specs(Qi):
    rep = average_value_check(Qi, PHI_STAR, 100)
    text = rep.to_csv()
    assert text.splitlines()[0] == "t,class,lhs,rhs,ratio"
    assert len(text.splitlines()) == 3
    assert get_spec("one") is ONE
    with pytest.raises(ValueError):
        get_spec("sigma")
