"""The limiting profile zeta_i = exp(lambda + mu i - (ln2/2) i^2) with certified brackets.

The weights live on i >= i0 and satisfy sum zeta_i = 1 and sum i zeta_i = T(x)
with T(x) = 1 + 2/ln2 - x. Infinite series are truncated at i = 20. For
mu < 3 the neglected tail, even weighted by i, is below e^{-83}, and that
bound is added explicitly wherever it matters. All arithmetic is in
outward-rounded intervals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import DEFAULTS
from .errors import CertificationError, DomainError, NoSignChange
from .numeric import Interval

TRUNC = 20
LN2 = Interval.around(math.log(2))
HALF_LN2 = LN2 * 0.5
TWO_OVER_LN2 = Interval.point(2.0) / LN2
X_TURN = TWO_OVER_LN2 - 2          # 2/ln2 - 2, where zeta_3 peaks
TAIL = Interval.point(-83.0).exp()  # e^{-83}
TAIL_BOX = Interval(0.0, TAIL.hi)
MU_CAP = 3.0

_QUAD = [HALF_LN2 * (i * i) for i in range(64)]


def T_of(x) -> Interval:
    """T(x) = 1 + 2/ln2 - x."""
    return 1 + TWO_OVER_LN2 - Interval.coerce(x)


def _term(mu: Interval, i: int) -> Interval:
    return (mu * i - _QUAD[i]).exp()


def _weight_sum(mu: Interval, i0: int) -> Interval:
    return sum((_term(mu, i) for i in range(i0 + 1, TRUNC + 1)), _term(mu, i0))


def _moment_sum(mu: Interval, i0: int, T: Interval) -> Interval:
    """Truncated sum_{i0 <= i <= 20} (i - T) e^{mu i - (ln2/2) i^2}."""
    acc = Interval.point(0.0)
    for i in range(i0, TRUNC + 1):
        acc = acc + (i - T) * _term(mu, i)
    return acc


def _mu_sign(mu: float, i0: int, T: Interval) -> int:
    """+1 if mu certifiably exceeds the root, -1 if certifiably below, else 0."""
    s = _moment_sum(Interval.point(mu), i0, T)
    if s.lo > 0:
        return 1
    if s.hi < -TAIL.hi:
        return -1
    return 0


@dataclass(frozen=True)
class LimitSystem:
    i0: int
    x: Interval
    T: Interval
    mu: Interval
    lam: Interval
    zeta: dict[int, Interval] = field(repr=False)

    def zeta_at(self, i: int) -> Interval:
        if i < self.i0:
            return Interval.point(0.0)
        if i in self.zeta:
            return self.zeta[i]
        return _zeta_bracket(self.lam, self.mu, i)


def _zeta_bracket(lam: Interval, mu: Interval, i: int) -> Interval:
    lo = (Interval.point(lam.lo) + Interval.point(mu.lo) * i - _QUAD[i]).exp().lo
    hi = (Interval.point(lam.hi) + Interval.point(mu.hi) * i - _QUAD[i]).exp().hi
    return Interval(lo, hi)


def solve_limit(i0: int, x, width: float | None = None) -> LimitSystem:
    """Certified brackets for mu, lambda and zeta_i at (i0, x).

    ``x`` may be a float or an Interval enclosing an irrational x such as 2/ln2 - 2.
    The mu bracket is narrowed by bisection on the certified sign of the
    truncated moment sum; midpoint arithmetic never decides a step.
    """
    if i0 not in (1, 2):
        raise DomainError(f"i0 must be 1 or 2, got {i0}")
    xi = Interval.coerce(x)
    if xi.lo < 0 or xi.hi > 1:
        raise DomainError(f"x must lie in [0, 1], got {xi}")
    width = DEFAULTS["mu_bracket_width"] if width is None else width
    T = T_of(xi)
    lo, hi = 0.0, math.nextafter(MU_CAP, 0)
    while _mu_sign(lo, i0, T) != -1:
        lo -= 5.0
        if lo < -50:
            raise NoSignChange("could not certify a lower bracket for mu")
    if _mu_sign(hi, i0, T) != 1:
        raise CertificationError("mu >= 3: the e^{-83} tail bound does not apply")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        sgn = _mu_sign(mid, i0, T)
        if sgn == 1:
            hi = mid
        elif sgn == -1:
            lo = mid
        else:
            break
    mu = Interval(lo, hi)
    lam_lo = (-(_weight_sum(Interval.point(hi), i0) + TAIL).log()).lo
    lam_hi = (-(_weight_sum(Interval.point(lo), i0)).log()).hi
    lam = Interval(lam_lo, lam_hi)
    zeta = {i: _zeta_bracket(lam, mu, i) for i in range(i0, TRUNC + 1)}
    return LimitSystem(i0, xi, T, mu, lam, zeta)


def neg_xlogx(y: Interval) -> tuple[Interval, bool]:
    """Enclosure of -y ln y over y in [0, 1], with 0 ln 0 = 0.

    The enclosure is clipped to [0, 1], which is sound whenever the true
    argument is known to lie there. The flag reports that clipping below 0
    was needed.
    """
    widened = y.lo < 0
    lo, hi = max(y.lo, 0.0), min(y.hi, 1.0)
    if lo > hi:
        raise DomainError(f"argument {y} misses [0, 1]")

    def f(v: float) -> Interval:
        if v == 0:
            return Interval.point(0.0)
        p = Interval.point(v)
        return -(p * p.log())

    inv_e = math.exp(-1)
    flo, fhi = f(lo), f(hi)
    if hi <= math.nextafter(inv_e, 0):
        return Interval(max(0.0, flo.lo), fhi.hi), widened
    if lo >= math.nextafter(inv_e, 1):
        return Interval(max(0.0, fhi.lo), flo.hi), widened
    top = math.nextafter(math.nextafter(inv_e, 1), 1)
    return Interval(max(0.0, min(flo.lo, fhi.lo)), top), widened


def phi_enclosure(sys: LimitSystem, s: int) -> tuple[Interval, bool]:
    if not sys.i0 <= s <= TRUNC:
        raise DomainError(f"need i0 <= s <= {TRUNC}, got s={s}")
    zs = [sys.zeta[i] for i in range(sys.i0, s + 1)]
    total = sum(zs[1:], zs[0])
    ent, widened = neg_xlogx(1 - total)
    lin = Interval.point(0.0)
    for i, z in zip(range(sys.i0, s + 1), zs):
        lin = lin + z * (i - sys.T)
    return ent + HALF_LN2 * lin, widened


def phi(sys: LimitSystem, s: int) -> Interval:
    """-(1 - Z) ln(1 - Z) + (ln2/2) sum_{i0<=i<=s} zeta_i (i - T), Z = sum zeta_i."""
    return phi_enclosure(sys, s)[0]


def x0_root(tol: float | None = None) -> Interval:
    """Certified bracket for the root of phi(1, x, 1) on [0.01, 0.05].

    phi is certified negative at the returned lower end and positive at the
    upper end.
    """
    tol = DEFAULTS["x0_tol"] if tol is None else tol
    if tol < 1e-6:
        raise DomainError("x0_root supports tol >= 1e-6")

    def sign(x: float) -> int:
        v = phi(solve_limit(1, x), 1)
        return 1 if v.lo > 0 else (-1 if v.hi < 0 else 0)

    lo, hi = 0.01, 0.05
    if sign(lo) != -1 or sign(hi) != 1:
        raise NoSignChange("phi(1, x, 1) shows no certified sign change on [0.01, 0.05]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        sg = sign(mid)
        if sg == 1:
            hi = mid
        elif sg == -1:
            lo = mid
        else:
            break
    return Interval(lo, hi)


@dataclass(frozen=True)
class TailSums:
    ell: int
    S: Interval
    Sprime: Interval
    E: Interval


def tail_sums(sys: LimitSystem, ell: int) -> TailSums:
    """S_l = sum_{j>=0} e^{mu j - (ln2/2)(j^2 + 2 j l)}, S'_l with an extra factor j, and E_l."""
    if not sys.i0 <= ell <= TRUNC + 1:
        raise DomainError(f"need i0 <= ell <= {TRUNC + 1}, got {ell}")
    S = Interval.point(1.0)
    Sp = Interval.point(0.0)
    for j in range(1, TRUNC + 1):
        term = (sys.mu * j - HALF_LN2 * (j * j + 2 * j * ell)).exp()
        S = S + term
        Sp = Sp + term * j
    S = S + TAIL_BOX
    Sp = Sp + TAIL_BOX
    z = sys.zeta_at(ell)
    E = S * (-(z * S).log() - HALF_LN2 * ell + HALF_LN2 * sys.T) - HALF_LN2 * Sp
    return TailSums(ell, S, Sp, E)


def e_ell_equiv(sys: LimitSystem, s: int) -> bool | None:
    """Whether sign(phi(s)) matches sign(E_{s+1}); None when either straddles 0."""
    p = phi(sys, s)
    e = tail_sums(sys, s + 1).E
    if p.lo <= 0 <= p.hi or e.lo <= 0 <= e.hi:
        return None
    return (p.lo > 0) == (e.lo > 0)
