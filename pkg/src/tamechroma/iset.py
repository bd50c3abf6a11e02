"""Independent-set statistics of G(n, p) and the G(n, m) edge-exclusion ratio."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import DEFAULTS
from .errors import DomainError
from .numeric import LogReal, log_binomial


@dataclass(frozen=True)
class GraphParams:
    """Parameters of G(n, p) and the matching G(n, m).

    ``m`` defaults to floor(p * N) where N = C(n, 2).
    """

    n: int
    p: float = 0.5
    m: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        if not 0 < self.p < 1:
            raise DomainError(f"p must lie in (0, 1), got {self.p}")
        if self.m is None:
            object.__setattr__(self, "m", math.floor(self.p * self.N))
        if not 0 <= self.m <= self.N:
            raise DomainError(f"m must lie in [0, {self.N}], got {self.m}")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def log_q(self) -> float:
        return math.log1p(-self.p)

    @property
    def b(self) -> float:
        return 1.0 / self.q

    @property
    def log_b(self) -> float:
        return -self.log_q

    @property
    def N(self) -> int:
        return self.n * (self.n - 1) // 2


def mu(params: GraphParams, t: int) -> LogReal:
    """Expected number of independent t-sets, C(n, t) q^C(t, 2)."""
    if not 1 <= t <= params.n:
        raise DomainError(f"t must lie in [1, {params.n}], got {t}")
    return LogReal.from_log(log_binomial(params.n, t) + t * (t - 1) / 2 * params.log_q)


def alpha0(params: GraphParams) -> float:
    """2 log_b n - 2 log_b log_b n + 2 log_b(e/2) + 1."""
    lb = params.log_b
    logb_n = math.log(params.n) / lb
    if logb_n <= 1:
        raise DomainError(f"n={params.n} too small: log_b log_b n must be positive")
    return 2 * logb_n - 2 * math.log(logb_n) / lb + 2 * (1 - math.log(2)) / lb + 1


def alpha(params: GraphParams) -> int:
    # plain floor of the computed value; a near-integer is never snapped upward
    return math.floor(alpha0(params))


def theta(params: GraphParams) -> float:
    """theta with mu_alpha = n^theta, from the exact mu_alpha."""
    m = mu(params, alpha(params))
    return m.log_abs / math.log(params.n)


@dataclass(frozen=True)
class MuRatio:
    ratio: LogReal
    predictor: LogReal
    band: float

    def within_band(self) -> bool:
        gap = abs(self.ratio.log_abs - self.predictor.log_abs)
        return gap <= math.log(self.band)


def mu_ratio(params: GraphParams, a: int, u: int, band: float | None = None) -> MuRatio:
    """mu_u / mu_a together with the predictor (n b^{-(a-u)/2} / ln n)^{a-u}."""
    al = alpha(params)
    if not 0.1 * al <= u <= 10 * al:
        raise DomainError(f"u={u} outside [0.1 alpha, 10 alpha] with alpha={al}")
    ratio = mu(params, u) / mu(params, a)
    d = a - u
    log_pred = d * (math.log(params.n) - d / 2 * params.log_b - math.log(math.log(params.n)))
    return MuRatio(ratio, LogReal.from_log(log_pred),
                   DEFAULTS["mu_ratio_band"] if band is None else band)


def gnm_exclusion_ratio(params: GraphParams, x: int, exact: bool = True) -> LogReal:
    """P(x fixed pairs are all non-edges) in G(n, m).

    Exact mode is C(N-x, m)/C(N, m); asymptotic mode is q^x exp(-(b-1)x^2/n^2).
    """
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    N, m = params.N, params.m
    if exact:
        if x > N - m:
            return LogReal.zero()
        return LogReal.from_log(log_binomial(N - x, m) - log_binomial(N, m))
    return LogReal.from_log(x * params.log_q - (params.b - 1) * x * x / params.n ** 2)
