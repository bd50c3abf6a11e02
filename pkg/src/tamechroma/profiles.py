"""Colouring profiles and their expected counts in G(n, p) and G(n, m)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping

from .errors import DomainError
from .iset import GraphParams, alpha, alpha0, gnm_exclusion_ratio
from .numeric import LogReal

RATIONAL_MAX_N = 12
MODELS = ("gnp", "gnm")


class Profile:
    """Counts k_u of colour classes of each size u, for n vertices and bound t.

    A profile is complete when the classes cover all n vertices, partial
    otherwise. Instances are immutable and hashable.
    """

    __slots__ = ("_n", "_items", "_t")

    def __init__(self, n: int, counts: Mapping[int, int], t: int | None = None):
        items = []
        for u, k in counts.items():
            u, k = int(u), int(k)
            if k < 0:
                raise DomainError(f"negative count k_{u} = {k}")
            if k == 0:
                continue
            if u < 1:
                raise DomainError(f"class size must be positive, got {u}")
            items.append((u, k))
        items.sort(reverse=True)
        if t is None:
            t = items[0][0] if items else 1
        if items and items[0][0] > t:
            raise DomainError(f"class size {items[0][0]} exceeds the bound t = {t}")
        coverage = sum(u * k for u, k in items)
        if coverage > n:
            raise DomainError(f"profile covers {coverage} > n = {n} vertices")
        self._n, self._items, self._t = int(n), tuple(items), int(t)

    @property
    def n(self) -> int:
        return self._n

    @property
    def t(self) -> int:
        return self._t

    @property
    def items(self) -> tuple[tuple[int, int], ...]:
        """(u, k_u) pairs with k_u > 0, by decreasing u."""
        return self._items

    @property
    def counts(self) -> dict[int, int]:
        return dict(self._items)

    @property
    def k(self) -> int:
        return sum(k for _, k in self._items)

    @property
    def coverage(self) -> int:
        return sum(u * k for u, k in self._items)

    @property
    def complete(self) -> bool:
        return self.coverage == self._n

    def kappa(self, u: int) -> float:
        return u * self.counts.get(u, 0) / self._n

    def sizes(self) -> list[int]:
        """Part sizes in nonincreasing order, one entry per class."""
        return [u for u, k in self._items for _ in range(k)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Profile) and self._n == other._n
                and self._items == other._items and self._t == other._t)

    def __hash__(self) -> int:
        return hash((self._n, self._items, self._t))

    def __repr__(self) -> str:
        body = ", ".join(f"{u}: {k}" for u, k in self._items)
        return f"Profile(n={self._n}, {{{body}}}, t={self._t})"


def p_count(pr: Profile) -> LogReal:
    """Number of ordered partitions with profile ``pr``.

    n! / (prod u!^{k_u} (n - coverage)!); the last factor is 1 for complete profiles.
    """
    log = math.lgamma(pr.n + 1) - math.lgamma(pr.n - pr.coverage + 1)
    log -= sum(k * math.lgamma(u + 1) for u, k in pr.items)
    return LogReal.from_log(log)


def p_count_exact(pr: Profile) -> int:
    denom = math.factorial(pr.n - pr.coverage)
    for u, k in pr.items:
        denom *= math.factorial(u) ** k
    return math.factorial(pr.n) // denom


def f_count(pr: Profile) -> int:
    """Number of vertex pairs that must be non-edges: sum C(u, 2) k_u."""
    return sum(u * (u - 1) // 2 * k for u, k in pr.items)


def _log_sym_factor(pr: Profile) -> float:
    return sum(math.lgamma(k + 1) for _, k in pr.items)


def _check(pr: Profile, params: GraphParams, model: str):
    if model not in MODELS:
        raise DomainError(f"model must be one of {MODELS}, got {model!r}")
    if pr.n != params.n:
        raise DomainError(f"profile has n={pr.n} but params have n={params.n}")


def expect_ordered(pr: Profile, params: GraphParams, model: str = "gnp") -> LogReal:
    """Expected number of ordered colourings with profile ``pr``."""
    _check(pr, params, model)
    f = f_count(pr)
    if model == "gnp":
        return p_count(pr) * LogReal.from_log(f * params.log_q)
    return p_count(pr) * gnm_exclusion_ratio(params, f, exact=True)


def expect_unordered(pr: Profile, params: GraphParams, model: str = "gnp") -> LogReal:
    """Expected number of unordered colourings: the ordered value over prod k_u!."""
    return expect_ordered(pr, params, model) / LogReal.from_log(_log_sym_factor(pr))


def expect_exact(pr: Profile, model: str = "gnp", p: Fraction | int | str = Fraction(1, 2),
                 m: int | None = None, ordered: bool = True) -> Fraction:
    """Rational expectation for n <= 12.

    ``p`` is used for G(n, p); ``m`` (required) for G(n, m).
    """
    if pr.n > RATIONAL_MAX_N:
        raise DomainError(f"rational mode is limited to n <= {RATIONAL_MAX_N}")
    f = f_count(pr)
    N = pr.n * (pr.n - 1) // 2
    if model == "gnp":
        value = p_count_exact(pr) * (1 - Fraction(p)) ** f
    elif model == "gnm":
        if m is None or not 0 <= m <= N:
            raise DomainError(f"gnm needs 0 <= m <= {N}")
        value = Fraction(p_count_exact(pr) * math.comb(N - f, m), math.comb(N, m))
    else:
        raise DomainError(f"model must be one of {MODELS}, got {model!r}")
    if not ordered:
        for _, k in pr.items:
            value /= math.factorial(k)
    return value


@dataclass(frozen=True)
class TamenessWitness:
    """Constant c in (0, 1) and an increasing, diverging gamma.

    Divergence of gamma cannot be checked and is taken on trust.
    """

    c: float
    gamma: Callable[[int], float]

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise DomainError(f"c must lie in (0, 1), got {self.c}")


@dataclass
class TamenessReport:
    violations: list[int]
    condition_a: bool
    condition_b: bool
    ln_expectation: float
    b_threshold: float
    note: str = field(default="condition (b) is a single-n surrogate: ln E_m >= -n^(1-c)")

    @property
    def tame(self) -> bool:
        return self.condition_a and self.condition_b


def tameness_check(pr: Profile, params: GraphParams, witness: TamenessWitness) -> TamenessReport:
    """Check both tameness conditions at this single n.

    (a) kappa_u < b^{-(alpha-u) gamma(alpha-u)} for every size u in use.
    (b) ln E_m[unordered count] >= -n^{1-c}.
    """
    al = alpha(params)
    violations = []
    for u, k in pr.items:
        if u > al:
            violations.append(u)
            continue
        log_kappa = math.log(u * k / pr.n)
        log_bound = -(al - u) * witness.gamma(al - u) * params.log_b
        if not log_kappa < log_bound:
            violations.append(u)
    e = expect_unordered(pr, params, "gnm")
    ln_e = e.log_abs if e.sign > 0 else -math.inf
    thr = -pr.n ** (1 - witness.c)
    return TamenessReport(sorted(violations), not violations, ln_e >= thr, ln_e, thr)


def equitable_profile(n: int, k: int) -> Profile:
    """Class sizes differing by at most one: n mod k classes of size ceil(n/k)."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    s, big = divmod(n, k)
    return Profile(n, {s + 1: big, s: k - big})


def phi_exponent(kappa: Mapping[float, float], params: GraphParams) -> float:
    """-(1-K) ln(1-K) + (ln b / 2) sum kappa_u (alpha0 - 1 - 2/ln b - u), K = sum kappa_u.

    ``kappa`` maps class size to the fraction of vertices in classes of that size.
    """
    al, a0, lb = alpha(params), alpha0(params), params.log_b
    total = 0.0
    acc = 0.0
    for u, kap in kappa.items():
        if kap < 0:
            raise DomainError(f"negative fraction at u={u}")
        if kap == 0:
            continue
        if not 0.1 * al <= u <= 10 * al:
            raise DomainError(f"kappa_{u} > 0 outside [0.1 alpha, 10 alpha]")
        total += kap
        acc += kap * (a0 - 1 - 2 / lb - u)
    if total > 1 + 1e-12:
        raise DomainError(f"fractions sum to {total} > 1")
    rest = max(0.0, 1 - total)
    ent = -rest * math.log(rest) if rest > 0 else 0.0
    return ent + lb / 2 * acc


def format_profile(pr: Profile) -> str:
    lines = [f"# n={pr.n} t={pr.t}"]
    lines += [f"{u} {k}" for u, k in pr.items]
    return "\n".join(lines) + "\n"


def parse_profile(text: str) -> Profile:
    """Parse the text format: a `# n=<n> t=<t>` header, then `u k_u` lines."""
    n = t = None
    counts: dict[int, int] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "n":
                    n = int(val)
                elif key == "t":
                    t = int(val)
            continue
        u, k = line.split()
        if int(u) in counts:
            raise DomainError(f"duplicate size {u}")
        counts[int(u)] = int(k)
    if n is None:
        raise DomainError("profile file lacks the '# n=<n>' header")
    return Profile(n, counts, t)


def read_profile(path: str | Path) -> Profile:
    return parse_profile(Path(path).read_text())


def write_profile(pr: Profile, path: str | Path) -> None:
    Path(path).write_text(format_profile(pr))
