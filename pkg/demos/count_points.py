"""Count points of bounded height on the A3 quartic two ways, then watch N(B) grow.

    python demos/count_points.py
"""
import math
import time

from a3count.number_field import make_field
from a3count.surface import brute_force_count
from a3count.torsor import count_trend, fiber_census, torsor_count

for d in ("Q", -1, -5):
    K = make_field(d)
    print(f"{K.name}: h={K.h}, units={K.units_count}")
    for B in (4, 10, 20):
        t = time.perf_counter()
        br = brute_force_count(K, B)
        tc = torsor_count(K, B)
        print(f"  B={B:>3}  brute={br.count:>5}  torsor={tc.count:>5}  ({time.perf_counter() - t:.1f}s)")

# each point of U has omega^6 preimages on the torsor
K = make_field(-5)
cen = fiber_census(K, 10)
print(f"\nfiber sizes over {K.name} at B=10: {cen['sizes']}")

# the leading constant is far off at this scale; log^5 B grows too slowly to settle
print("\n     B        N(B)   N/(B log^5 B)")
for B, n in count_trend(make_field("Q"), [10, 100, 1000, 10000]):
    B = int(B)
    print(f"{B:>6} {n:>11} {n / (B * math.log(B) ** 5):>15.5f}")
