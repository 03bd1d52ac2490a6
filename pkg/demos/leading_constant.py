"""Assemble the conjectured leading constant from its pieces, over Q and Q(i).

Two routes for omega_inf are printed side by side. Expect about a minute.
"""
from a3count.constant import alpha_montecarlo, alpha_volume, assemble_constant, theta8_average_identity
from a3count.number_field import make_field

ident = theta8_average_identity()
print("local average of theta_8:", [str(c) for c in ident.lhs], "matches:", ident.equal)
print("alpha exact:", alpha_volume(), " MC: %.4g +- %.1g" % alpha_montecarlo(500_000))

for d in ("Q", -1):
    K = make_field(d)
    b = assemble_constant(K, P=100_000, mc_samples=1_000_000)
    print(f"\n{K.name}")
    print(f"  prefactor  {b.prefactor_str} = {b.prefactor:.6g}")
    print(f"  Euler      {b.euler.value:.8f}  (lower bracket {b.euler.lower:.8f})")
    print(f"  omega_inf  {b.omega_inf.value:.8f} +- {b.omega_inf.err:.1g}  [{b.omega_inf.method}]")
    for name, ch in b.checks.items():
        print(f"    vs {name:<9} {ch['omega_inf'].value:.6f} +- {ch['omega_inf'].err:.1g}  rel diff {ch['rel_diff']:.2e}")
    print(f"  c = {b.c_value:.6e} +- {b.c_err:.1e}")
