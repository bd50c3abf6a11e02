"""
Bounded chromatic numbers of small random graphs
================================================

Exact chi_t on G(n, N/2) samples, and a Monte Carlo check of a colouring count.
"""
from collections import Counter

from tamechroma import GraphParams, Profile
from tamechroma.colouring import chi_bounded, chromatic_number, independence_number
from tamechroma.graphs import sample_gnm
from tamechroma.montecarlo import mc_expectation
from tamechroma.profiles import expect_ordered

n = 28
N = n * (n - 1) // 2
table = Counter()
for seed in range(30):
    g = sample_gnm(n, N // 2, seed)
    a = independence_number(g)
    row = tuple(chi_bounded(g, t) for t in (a - 2, a - 1, a))
    table[(a, row, chromatic_number(g))] += 1
for (a, row, chi), count in sorted(table.items()):
    print(f"alpha={a} chi_(a-2..a)={row} chi={chi}  x{count}")

pr = Profile(10, {3: 2, 2: 2})
res = mc_expectation(GraphParams(10), pr, 50_000, seed=1, level=0.99)
print(f"MC mean {float(res.mean):.3f}, 99% CI [{res.ci.lo:.3f}, {res.ci.hi:.3f}]")
print(f"exact   {float(expect_ordered(pr, GraphParams(10))):.3f}")
