"""
The limiting profile and the positivity certificate
===================================================

As n grows the class-size weights approach zeta_i = exp(lambda + mu i - (ln2/2) i^2).
All numbers below are certified intervals.
"""
from tamechroma.certificate import certify_positivity
from tamechroma.limits import X_TURN, phi, solve_limit, x0_root

for i0 in (1, 2):
    for x in (0.0, 0.15, X_TURN, 1.0):
        s = solve_limit(i0, x)
        z = "  ".join(f"z{i}=[{s.zeta[i].lo:.4f},{s.zeta[i].hi:.4f}]" for i in range(i0, 4))
        print(f"i0={i0} x={s.x.mid:.4f}  mu=[{s.mu.lo:.5f},{s.mu.hi:.5f}]  {z}")

root = x0_root()
print(f"x0 in [{root.lo:.7f}, {root.hi:.7f}]")
for x in (0.0, 0.02, 0.04, 0.5):
    v = phi(solve_limit(1, x), 1)
    print(f"phi(1, {x}, 1) in [{v.lo:.6f}, {v.hi:.6f}]")

cert = certify_positivity()
print("certified:", cert["certified"])
for case in cert["cases"]:
    # corners that vanish by construction (all zeta at 0) are skipped
    worst = min(c["enclosure"][0] for c in case["corners"] if not c["construction_zero"])
    print(f"  case {case['case']:>4}: {case['lower_bound']:8s} smallest corner lower bound {worst:.6f}")
