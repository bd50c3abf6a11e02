"""The expectation-maximizing t-bounded profile and first-moment thresholds.

For p = 1/2 the optimal continuous profile has weights
p_u = exp(x + u y) / d_u with d_u = 2^C(u,2) u!, where (x, y) are fixed by
sum p_u = 1 and sum u p_u = rho = n/k. Everything here is for p = 1/2 unless a
``p`` argument says otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .constants import DEFAULTS
from .errors import DomainError, NoSignChange
from .iset import GraphParams, alpha
from .numeric import LogReal, newton2
from .profiles import Profile, expect_exact, expect_unordered

LN2 = math.log(2)
EXACT_MAX_N = 60


def log_d(u: int, p: float = 0.5) -> float:
    """ln d_u with d_u = b^C(u,2) u!."""
    return u * (u - 1) / 2 * -math.log1p(-p) + math.lgamma(u + 1)


def h_n(alpha_: int, i: int) -> float:
    """-(ln2/2) i^2 - ln((alpha-i)!) + ln sqrt(2 pi) + (alpha-i+1/2) ln alpha - alpha."""
    if not 0 <= i <= alpha_ - 1:
        raise DomainError(f"need 0 <= i <= alpha-1, got i={i}, alpha={alpha_}")
    return (-LN2 / 2 * i * i - math.lgamma(alpha_ - i + 1) + 0.5 * math.log(2 * math.pi)
            + (alpha_ - i + 0.5) * math.log(alpha_) - alpha_)


@dataclass(frozen=True)
class ContinuousProfile:
    n: int
    k: float
    t: int
    rho: float
    x_t: float
    y_t: float
    p: tuple[float, ...]        # p[u-1] for u = 1..t
    log_d: tuple[float, ...]
    residual: float
    p_edge: float = 0.5

    def p_u(self, u: int) -> float:
        return self.p[u - 1] if 1 <= u <= self.t else 0.0


def _weights(y: float, us: np.ndarray, ld: np.ndarray):
    g = us * y - ld
    top = g.max()
    w = np.exp(g - top)
    s = w.sum()
    return top + math.log(s), w / s


def _initial_y(n: int, p: float) -> float:
    lb = -math.log1p(-p)
    try:
        al = alpha(GraphParams(n, p))
    except DomainError:
        return 2 * math.log(n)
    if al < 2:
        return 2 * math.log(n)
    # mu_n = O(1) translated back; 2.3 sits in the middle of the limit system range
    return al * lb + math.log(al) - lb / 2 - 2.3


def solve_continuous(n: int, k: float, t: int, p: float = 0.5,
                     tol: float | None = None) -> ContinuousProfile:
    """Solve sum p_u = 1, sum u p_u = n/k for the multipliers (x_t, y_t).

    The first equation is used in the form x + ln sum exp(u y - ln d_u) = 0,
    which keeps the Newton iteration free of overflow.
    """
    rho = n / k
    if not 1 < rho < t:
        raise DomainError(f"need 1 < n/k < t, got n/k={rho}, t={t}")
    tol = DEFAULTS["newton_tol"] if tol is None else tol
    us = np.arange(1, t + 1, dtype=float)
    ld = np.array([log_d(u, p) for u in range(1, t + 1)])

    def F(x, y):
        lse, w = _weights(y, us, ld)
        return x + lse, float(w @ us) - rho

    def J(x, y):
        _, w = _weights(y, us, ld)
        mean = float(w @ us)
        var = float(w @ (us - mean) ** 2)
        return (1.0, mean), (0.0, var)

    y0 = _initial_y(n, p)
    x0 = -_weights(y0, us, ld)[0]
    x, y = newton2(F, J, (x0, y0), tol=tol, max_iter=int(DEFAULTS["newton_max_iter"]))
    pu = np.exp(x + us * y - ld)
    residual = max(abs(math.fsum(pu) - 1), abs(math.fsum(us * pu) - rho))
    return ContinuousProfile(n, k, t, rho, x, y, tuple(pu.tolist()), tuple(ld.tolist()),
                             residual, p)


@dataclass(frozen=True)
class ReparamProfile:
    alpha: int
    lambda_n: float
    mu_n: float
    xi: dict[int, float]        # i -> xi_i = p_{alpha - i}
    h: dict[int, float]


def reparametrize(cp: ContinuousProfile, n: int | None = None) -> ReparamProfile:
    """Rewrite p_u in the variable i = alpha - u as exp(h_n(i) + lambda_n + mu_n i)."""
    if cp.p_edge != 0.5:
        raise DomainError("the reparametrization is defined for p = 1/2 only")
    n = cp.n if n is None else n
    al = alpha(GraphParams(n))
    if cp.t > al:
        raise DomainError(f"t={cp.t} exceeds alpha={al}")
    mu_n = -cp.y_t + al * LN2 + math.log(al) - LN2 / 2
    idx = range(al - cp.t, al)
    h = {i: h_n(al, i) for i in idx}
    expo = [h[i] + mu_n * i for i in idx]
    top = max(expo)
    lam = -(top + math.log(math.fsum(math.exp(e - top) for e in expo)))
    xi = {i: cp.p_u(al - i) for i in idx}
    return ReparamProfile(al, lam, mu_n, xi, h)


def L_profile(n: int, counts: dict[int, float], p: float = 0.5) -> float:
    """L_k = n ln n - n + k - sum k_u ln(k_u d_u), with 0 ln 0 = 0."""
    k = sum(counts.values())
    s = math.fsum(c * (math.log(c) + log_d(u, p)) for u, c in counts.items() if c > 0)
    return n * math.log(n) - n + k - s


def L_tilde(rho: float, k: float, p_weights, p: float = 0.5) -> float:
    """rho ln(rho k) - ln k - rho + 1 - sum p_u ln(p_u d_u)."""
    s = math.fsum(w * (math.log(w) + log_d(u, p))
                  for u, w in enumerate(p_weights, start=1) if w > 0)
    return rho * math.log(rho * k) - math.log(k) - rho + 1 - s


def L0(n: int, k: float, t: int, p: float = 0.5) -> float:
    """Maximum of L_k over continuous t-bounded profiles with k classes.

    At the maximizer sum k p_u ln(k p_u d_u) = k ln k + k x + n y, giving a
    closed form. The endpoints rho = 1 and rho = t have a single feasible profile.
    """
    rho = n / k
    if rho < 1 or rho > t:
        raise DomainError(f"need 1 <= n/k <= t, got n/k={rho}")
    if rho == 1:
        return 0.0
    if rho == t:
        return L_profile(n, {t: k}, p)
    cp = solve_continuous(n, k, t, p)
    return n * math.log(n) - n + k - k * math.log(k) - k * cp.x_t - n * cp.y_t


@dataclass
class RoundingReport:
    profile: Profile
    u_star: int
    changes: int
    perturbation: float
    real_counts: dict[int, float] = field(repr=False)


def rounding_report(cp: ContinuousProfile, n: int, k: int, t: int) -> RoundingReport:
    """Integer profile near k * p_u, built by tail removal, carry sweep and neighbour changes."""
    if int(k) != k:
        raise DomainError("rounding needs an integer number of classes")
    k = int(k)
    real = {u: k * cp.p_u(u) for u in range(1, t + 1)}
    # largest u* whose lower tail carries weight below 1/n^2
    tail_cap = 1.0 / n ** 2
    u_star, tail = 1, 0.0
    for u in range(2, t + 1):
        tail += cp.p_u(u - 1)
        if tail < tail_cap:
            u_star = u
        else:
            break
    removed = math.fsum(real[u] for u in range(1, u_star))
    work = {u: real[u] for u in range(u_star, t + 1)}
    work[u_star] += removed

    ints: dict[int, int] = {}
    carry = 0.0
    for u in range(u_star, t):
        val = work[u] + carry
        fl = math.floor(val + 1e-9)
        ints[u] = max(fl, 0)
        carry = val - ints[u]
    ints[t] = k - sum(ints.values())
    if ints[t] < 0 or abs(ints[t] - (work[t] + carry)) > 1e-6 * max(1.0, k):
        raise DomainError("carry sweep lost track of the class count")

    excess = sum(u * c for u, c in ints.items()) - n
    changes = 0
    while excess != 0:
        if excess > 0:
            # k_u += 1, k_{u+1} -= 1 at the largest u+1 holding a class
            v = next((v for v in range(t, 1, -1) if ints.get(v, 0) >= 1), None)
            if v is None:
                raise DomainError("no neighbour change available")
            ints[v] -= 1
            ints[v - 1] = ints.get(v - 1, 0) + 1
            excess -= 1
        else:
            u = next((u for u in range(t - 1, 0, -1) if ints.get(u, 0) >= 1), None)
            if u is None:
                raise DomainError("no neighbour change available")
            ints[u] -= 1
            ints[u + 1] = ints.get(u + 1, 0) + 1
            excess += 1
        changes += 1
    pert = math.fsum(abs(ints.get(u, 0) - real[u]) for u in range(1, t + 1))
    return RoundingReport(Profile(n, ints, t), u_star, changes, pert, real)


def round_to_integer(cp: ContinuousProfile, n: int, k: int, t: int) -> Profile:
    return rounding_report(cp, n, k, t).profile


def profiles_with(n: int, k: int, t: int):
    """Yield every profile dict {u: k_u} with k classes of size <= t covering n."""
    def rec(rem_n, rem_k, u):
        if u == 0:
            if rem_n == 0 and rem_k == 0:
                yield {}
            return
        top = min(rem_k, rem_n // u)
        for c in range(top, -1, -1):
            n2, k2 = rem_n - c * u, rem_k - c
            if k2 <= n2 <= k2 * (u - 1):
                for rest in rec(n2, k2, u - 1):
                    if c:
                        rest[u] = c
                    yield rest
    if k < 0 or t < 1:
        return
    yield from rec(n, k, min(t, n))


def exact_first_moment_rational(n: int, k: int, t: int, p=Fraction(1, 2)) -> Fraction:
    return sum((expect_exact(Profile(n, c, t), "gnp", p, ordered=False)
                for c in profiles_with(n, k, t)), Fraction(0))


def exact_first_moment(n: int, k: int, t: int, params: GraphParams | None = None) -> LogReal:
    """Expected number of unordered t-bounded k-colourings in G(n, p)."""
    if n > EXACT_MAX_N:
        raise DomainError(f"enumeration is limited to n <= {EXACT_MAX_N}")
    params = GraphParams(n) if params is None else params
    if n <= 12:
        val = exact_first_moment_rational(n, k, t, Fraction(params.p))
        if val == 0:
            return LogReal.zero()
        return LogReal.from_log(math.log(val.numerator) - math.log(val.denominator))
    total = LogReal.zero()
    for c in profiles_with(n, k, t):
        total = total + expect_unordered(Profile(n, c, t), params, "gnp")
    return total


def threshold_uncertainty(n: int, band: float | None = None) -> int:
    band = DEFAULTS["L0_crossing_band"] if band is None else band
    ln = math.log(n)
    return math.ceil(band * ln ** 1.5 / (2 / LN2 * ln * ln))


def threshold(n: int, t: int, mode: str = "exact", params: GraphParams | None = None):
    """Least k whose expected number of t-bounded k-colourings reaches 1.

    ``mode="exact"`` scans the exact first moment (n <= 60); ``mode="L0"``
    bisects on the sign of L0 and reports an uncertainty in colours.
    """
    lo = math.ceil(n / t)
    if mode == "exact":
        params = GraphParams(n) if params is None else params
        prev = None
        for k in range(lo, n + 1):
            if n <= 12:
                val = exact_first_moment_rational(n, k, t, Fraction(params.p))
                hit = val >= 1
                logv = math.log(val) if val > 0 else -math.inf
            else:
                e = exact_first_moment(n, k, t, params)
                logv = e.log_abs if e.sign > 0 else -math.inf
                hit = logv >= 0
            if hit:
                return k, {"mode": "exact", "ln_E_at_k": logv, "ln_E_at_k_minus_1": prev}
            prev = logv
        raise NoSignChange(f"expected count never reaches 1 for n={n}, t={t}")
    if mode != "L0":
        raise DomainError(f"mode must be 'exact' or 'L0', got {mode!r}")
    hi = n
    if n - 1 >= lo and L0(n, n - 1, t) >= 0:
        hi = n - 1
    if L0(n, lo, t) >= 0:
        k = lo
    else:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if L0(n, mid, t) >= 0:
                hi = mid
            else:
                lo = mid
        k = hi
    unc = threshold_uncertainty(n)
    return k, {
        "mode": "L0",
        "L0_at_k": L0(n, k, t),
        "L0_at_k_minus_1": L0(n, k - 1, t) if n / (k - 1) <= t else None,
        "uncertainty": unc,
        "candidates": [k - 1, k],
    }
