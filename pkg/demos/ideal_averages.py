"""Ideal counts and averages of multiplicative functions over imaginary quadratic fields."""
from a3count.analytic import PHI_STAR, average_euler, average_mobius, decay_exponent, deviation_profile, ideal_density_check
from a3count.number_field import make_field

for d in (-1, -5, -23):
    K = make_field(d)
    rep = ideal_density_check(K, 100_000)
    per = ", ".join(f"{r.ratio:.5f}" for r in rep.rows[:-1])
    print(f"{K.name:>14}  h={K.h}  count/(rho t) per class at t=1e5: {per}")

K = make_field(-1)
e, m = average_euler(K, PHI_STAR, 100_000), average_mobius(K, PHI_STAR, 100_000)
print(f"\nphi* average over Z[i]: Euler {e.value:.7f} in [{e.lower:.7f}, {e.upper:.7f}]")
print(f"                        Mobius {m.value:.7f} in [{m.lower:.7f}, {m.upper:.7f}]")
prof = deviation_profile(K, PHI_STAR, [2_500, 10_000, 40_000])
for t, dev in prof:
    print(f"  worst relative error on (t/2, t], t={t}: {dev:.2e}")
print(f"  fitted decay exponent {decay_exponent(prof):.2f}")
