"""Closed-form quantities from the second-moment computation.

A pair of partitions with the same profile is summarised by how many parts
are identical (``ell``) and by the sizes of the blocks in which transmuted
parts meet (``r``, keyed by (x, u, v): blocks of size x between a part of size
u and a part of size v). These functions only evaluate formulas; they sum or
bound nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .errors import DomainError
from .iset import GraphParams, mu
from .numeric import LogReal, log_binomial
from .profiles import Profile


@dataclass(frozen=True)
class OverlapSpec:
    profile: Profile
    ell: dict[int, int] = field(default_factory=dict)
    r: dict[tuple[int, int, int], int] = field(default_factory=dict)
    a: int | None = None

    def __post_init__(self):
        counts = self.profile.counts
        if self.a is None:
            object.__setattr__(self, "a", self.profile.t)
        ell = {u: l for u, l in self.ell.items() if l}
        for u, l in ell.items():
            if not 0 <= l <= counts.get(u, 0):
                raise DomainError(f"ell_{u} = {l} outside [0, k_{u}]")
        r = {key: c for key, c in self.r.items() if c}
        for (x, u, v), c in r.items():
            if c < 0:
                raise DomainError(f"negative block count at {(x, u, v)}")
            if u not in counts or v not in counts:
                raise DomainError(f"block {(x, u, v)} uses a size outside the profile")
            if not 2 <= x <= min(u, v) or x >= self.a or (x == u == v):
                raise DomainError(f"block size x={x} not allowed between sizes {u}, {v}")
            if (x, u, v) == (self.a - 1, self.a - 1, self.a - 1):
                raise DomainError("r_{a-1}^{a-1,a-1} must vanish")
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "r", r)
        if self.r1 < 0:
            raise DomainError(f"blocks cover more than n_tr = {self.n_tr} vertices")

    @property
    def n(self) -> int:
        return self.profile.n

    def t_u(self, u: int) -> int:
        return self.profile.counts.get(u, 0) - self.ell.get(u, 0)

    @property
    def n_id(self) -> int:
        return sum(u * l for u, l in self.ell.items())

    @property
    def n_tr(self) -> int:
        return self.n - self.n_id

    @property
    def r1(self) -> int:
        return self.n_tr - sum(x * c for (x, _, _), c in self.r.items())

    @property
    def eta(self) -> float:
        return (self.n_tr - self.r1) / self.n_tr if self.n_tr else 0.0

    @property
    def lam(self) -> float:
        return self.n_id / self.n

    def r_x(self, x: int) -> int:
        return sum(c for (xx, _, _), c in self.r.items() if xx == x)


def shared_forbidden(spec: OverlapSpec) -> tuple[int, int, int]:
    """(g, g_id, g_tr): pairs forbidden in both partitions."""
    g_id = sum(u * (u - 1) // 2 * l for u, l in spec.ell.items())
    g_tr = sum(x * (x - 1) // 2 * c for (x, _, _), c in spec.r.items())
    return g_id + g_tr, g_id, g_tr


def _t_denominator(spec: OverlapSpec, x: int, log_q: float) -> float:
    return log_binomial(spec.n_tr, x) + x * (x - 1) / 2 * log_q


def t_term(spec: OverlapSpec, x: int, u: int, v: int, q: float) -> LogReal:
    """t_u t_v C(u,x) C(v,x) e^{x eta} / (C(n_tr,x) q^C(x,2))."""
    if x < 2 or x >= spec.n_tr:
        raise DomainError(f"need 2 <= x < n_tr = {spec.n_tr}, got {x}")
    tu, tv = spec.t_u(u), spec.t_u(v)
    if tu == 0 or tv == 0 or x > min(u, v):
        return LogReal.zero()
    log = (math.log(tu) + math.log(tv) + log_binomial(u, x) + log_binomial(v, x)
           + x * spec.eta - _t_denominator(spec, x, math.log(q)))
    return LogReal.from_log(log)


def t_sum(spec: OverlapSpec, x: int, q: float) -> LogReal:
    """T(x) summed over size pairs; the special form at x = a - 1."""
    if x < 2 or x >= spec.n_tr:
        raise DomainError(f"need 2 <= x < n_tr = {spec.n_tr}, got {x}")
    a = spec.a
    if x == a - 1:
        ta, ta1 = spec.t_u(a), spec.t_u(a - 1)
        inner = a * a * ta * ta + 2 * a * ta * ta1
        if inner == 0:
            return LogReal.zero()
        log = (a - 1) * spec.eta + math.log(inner) - _t_denominator(spec, x, math.log(q))
        return LogReal.from_log(log)
    total = LogReal.zero()
    sizes = [u for u, _ in spec.profile.items]
    for u in sizes:
        for v in sizes:
            total = total + t_term(spec, x, u, v, q)
    return total


@dataclass(frozen=True)
class FTerms:
    F1: LogReal
    F3: float
    M1: float
    M2: float


def m1_term(n: int, k_a: float, mu_a: float) -> float:
    """k_a^4 ln^2 n / (n mu_a^2)."""
    return k_a ** 4 * math.log(n) ** 2 / (n * mu_a ** 2)


def m2_term(n: int, mu_a: float, k_a: float, k_a1: float, k_a2: float) -> float:
    ln = math.log(n)
    return (n / (mu_a * ln) + (k_a ** 2 * ln ** 3 + k_a * k_a1 * ln ** 2) / (mu_a * n)
            + (k_a2 * ln + k_a1 * ln ** 2 + k_a * ln ** 3) ** 2 / (mu_a * n * n))


def f_terms(spec: OverlapSpec, params: GraphParams, partial_expectation: LogReal) -> FTerms:
    """F1, F3 and the error terms M1, M2 for one overlap specification.

    ``partial_expectation`` is E_p of the number of unordered partial
    colourings with profile ``ell``.
    """
    if partial_expectation.sign <= 0:
        raise DomainError("F1 needs a positive partial expectation")
    counts = spec.profile.counts
    log_f1 = sum(2 * log_binomial(k, spec.ell.get(u, 0)) for u, k in counts.items())
    F1 = LogReal.from_log(log_f1) / partial_expectation
    f = sum(u * (u - 1) // 2 * k for u, k in counts.items())
    g, g_id, _ = shared_forbidden(spec)
    n, a, b = spec.n, spec.a, params.b
    F3 = -(2 * (b - 1) * f * (f - 2 * g) + 2 * (f - g_id - a * (spec.n_tr - spec.r1)) ** 2) / n ** 2
    mu_a = float(mu(params, a))
    M1 = m1_term(n, counts.get(a, 0), mu_a)
    M2 = m2_term(n, mu_a, counts.get(a, 0), counts.get(a - 1, 0), counts.get(a - 2, 0))
    return FTerms(F1, F3, M1, M2)


def mckay_count(sigma, tau) -> tuple[LogReal, bool]:
    """Asymptotic number of 0-1 matrices with row sums sigma and column sums tau.

    Returns the value S!/(prod sigma_i! prod tau_j!) exp(-S2 T2 / (2 S^2)) and
    whether the regime max^2 < S/6 holds.
    """
    sigma, tau = [int(s) for s in sigma], [int(t) for t in tau]
    S = sum(sigma)
    if S != sum(tau):
        raise DomainError(f"row sums {S} and column sums {sum(tau)} differ")
    if S <= 0 or min(sigma + tau) < 0:
        raise DomainError("sums must be nonnegative with a positive total")
    S2 = sum(s * (s - 1) for s in sigma)
    T2 = sum(t * (t - 1) for t in tau)
    log = (math.lgamma(S + 1) - sum(math.lgamma(s + 1) for s in sigma)
           - sum(math.lgamma(t + 1) for t in tau) - S2 * T2 / (2 * S * S))
    valid = max(sigma + tau) ** 2 < S / 6
    return LogReal.from_log(log), valid


def count_01_matrices(sigma, tau) -> int:
    """Exact number of 0-1 matrices with the given row and column sums."""
    sigma, tau = list(sigma), list(tau)
    if sum(sigma) != sum(tau):
        return 0
    rows = len(sigma)

    @lru_cache(maxsize=None)
    def rec(i: int, cols: tuple[int, ...]) -> int:
        if i == rows:
            return int(not any(cols))
        need = sigma[i]
        open_ = [j for j, c in enumerate(cols) if c > 0]
        if need > len(open_):
            return 0
        total = 0
        for pick in combinations(open_, need):
            nxt = list(cols)
            for j in pick:
                nxt[j] -= 1
            total += rec(i + 1, tuple(nxt))
        return total

    return rec(0, tuple(tau))
