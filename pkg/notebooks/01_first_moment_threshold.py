"""
Where does the expected number of bounded colourings cross 1?
=============================================================

For small n the expectation can be summed over every profile. For large n
we switch to the entropy-like exponent L0 and bisect on k.
"""
import math

from tamechroma.iset import GraphParams, alpha, alpha0
from tamechroma.optimal import exact_first_moment, reparametrize, rounding_report, solve_continuous, threshold

# exact scan against the L0 estimate
for n in (30, 40, 50, 60):
    for t in (4, 5, 8):
        ke, _ = threshold(n, t)
        kl, diag = threshold(n, t, "L0")
        print(f"n={n:3d} t={t}: exact k_t={ke:3d}  L0 k_t={kl:3d} (+-{diag['uncertainty']})")

# the exact first moment around the crossing at n = 40, t = 5
for k in range(7, 11):
    print(k, f"ln E = {exact_first_moment(40, k, 5).log_abs:8.3f}")

# large n: average class size against the benchmark alpha0 - 1 - 2/ln 2
for e in (4, 5, 6, 7):
    n = 10 ** e
    P = GraphParams(n)
    t = alpha(P) - 2
    k, _ = threshold(n, t, "L0")
    print(f"n=1e{e}: t={t} k_t={k} n/k={n / k:.3f} benchmark={alpha0(P) - 1 - 2 / math.log(2):.3f}")

# the optimal profile at n = 1e6, rounded to integers
n = 10**6
t = alpha(GraphParams(n)) - 2
k, _ = threshold(n, t, "L0")
cp = solve_continuous(n, k, t)
rep = rounding_report(cp, n, k, t)
print("rounded profile:", dict(sorted(rep.profile.counts.items(), reverse=True)))
rp = reparametrize(cp)
print(f"lambda_n={rp.lambda_n:.4f} mu_n={rp.mu_n:.4f}")
