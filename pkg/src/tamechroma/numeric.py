"""Log-space reals, outward-rounded intervals and two small root finders."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError, DomainError, NoSignChange

CANCEL_REL = 1e-14


@dataclass(frozen=True)
class LogReal:
    """A real number kept as ``sign * exp(log_abs)``.

    Zero has sign 0 and ``log_abs = -inf``. Products add logarithms and sums
    go through log-sum-exp, so values like 10**(10**6) are unproblematic.
    """

    sign: int
    log_abs: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0:
            object.__setattr__(self, "log_abs", -math.inf)
        elif not math.isfinite(self.log_abs):
            if self.log_abs == -math.inf:
                object.__setattr__(self, "sign", 0)
            else:
                raise DomainError(f"non-finite log magnitude {self.log_abs}")

    @classmethod
    def zero(cls) -> LogReal:
        return cls(0, -math.inf)

    @classmethod
    def one(cls) -> LogReal:
        return cls(1, 0.0)

    @classmethod
    def from_log(cls, log_abs: float, sign: int = 1) -> LogReal:
        return cls(sign, log_abs)

    @classmethod
    def from_float(cls, x: float) -> LogReal:
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def coerce(cls, x) -> LogReal:
        return x if isinstance(x, LogReal) else cls.from_float(x)

    def is_zero(self) -> bool:
        return self.sign == 0

    def log(self) -> float:
        """Natural log of the value; requires a positive value."""
        if self.sign <= 0:
            raise DomainError("log of a non-positive LogReal")
        return self.log_abs

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_abs)
        except OverflowError:
            return self.sign * math.inf

    def __neg__(self) -> LogReal:
        return LogReal(-self.sign, self.log_abs)

    def __abs__(self) -> LogReal:
        return LogReal(abs(self.sign), self.log_abs)

    def __mul__(self, other) -> LogReal:
        other = LogReal.coerce(other)
        if self.sign == 0 or other.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * other.sign, self.log_abs + other.log_abs)

    __rmul__ = __mul__

    def __truediv__(self, other) -> LogReal:
        other = LogReal.coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogReal")
        if self.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * other.sign, self.log_abs - other.log_abs)

    def __rtruediv__(self, other) -> LogReal:
        return LogReal.coerce(other) / self

    def __pow__(self, power: float) -> LogReal:
        if self.sign < 0:
            raise DomainError("real power of a negative LogReal")
        if self.sign == 0:
            if power > 0:
                return LogReal.zero()
            raise ZeroDivisionError("non-positive power of zero")
        return LogReal(1, self.log_abs * power)

    def __add__(self, other) -> LogReal:
        other = LogReal.coerce(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.log_abs >= other.log_abs else (other, self)
        d = small.log_abs - big.log_abs
        if big.sign == small.sign:
            return LogReal(big.sign, big.log_abs + math.log1p(math.exp(d)))
        rel = -math.expm1(d)
        if rel < CANCEL_REL:
            return LogReal.zero()
        return LogReal(big.sign, big.log_abs + math.log(rel))

    __radd__ = __add__

    def __sub__(self, other) -> LogReal:
        return self + (-LogReal.coerce(other))

    def __rsub__(self, other) -> LogReal:
        return LogReal.coerce(other) - self

    def _key(self):
        # orderable proxy: (sign, signed log)
        return (self.sign, self.sign * self.log_abs if self.sign else 0.0)

    def __lt__(self, other) -> bool:
        return self._key() < LogReal.coerce(other)._key()

    def __le__(self, other) -> bool:
        return self._key() <= LogReal.coerce(other)._key()

    def __gt__(self, other) -> bool:
        return self._key() > LogReal.coerce(other)._key()

    def __ge__(self, other) -> bool:
        return self._key() >= LogReal.coerce(other)._key()

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogReal(0)"
        return f"LogReal({'-' if self.sign < 0 else ''}exp({self.log_abs:.12g}))"


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class Interval:
    """A closed interval with outward-rounded arithmetic.

    Every result is widened by one ulp on each side after the float operation
    (two ulps for exp and log, whose libm error can approach one ulp). The true
    result set is therefore always contained in the returned interval.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise DomainError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @classmethod
    def around(cls, x: float) -> Interval:
        """Enclose a value that was itself computed with rounding."""
        return cls(_down(x), _up(x))

    @classmethod
    def coerce(cls, x) -> Interval:
        return x if isinstance(x, Interval) else cls.point(float(x))

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def intersects(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def positive(self) -> bool:
        return self.lo > 0

    def negative(self) -> bool:
        return self.hi < 0

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> Interval:
        other = Interval.coerce(other)
        return Interval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other) -> Interval:
        return self + (-Interval.coerce(other))

    def __rsub__(self, other) -> Interval:
        return Interval.coerce(other) - self

    def __mul__(self, other) -> Interval:
        other = Interval.coerce(other)
        ps = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return Interval(_down(min(ps)), _up(max(ps)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> Interval:
        other = Interval.coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        qs = [self.lo / other.lo, self.lo / other.hi, self.hi / other.lo, self.hi / other.hi]
        return Interval(_down(min(qs)), _up(max(qs)))

    def __rtruediv__(self, other) -> Interval:
        return Interval.coerce(other) / self

    def exp(self) -> Interval:
        lo = max(0.0, _down(_down(_exp(self.lo))))
        return Interval(lo, _up(_up(_exp(self.hi))))

    def log(self) -> Interval:
        if self.lo <= 0:
            raise DomainError(f"log of interval with lo = {self.lo}")
        return Interval(_down(_down(math.log(self.lo))), _up(_up(math.log(self.hi))))

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _lnfact_correction(m: float) -> float:
    """ln m! minus its Stirling main part m ln m - m + 0.5 ln(2 pi m)."""
    if m < 12:
        return math.lgamma(m + 1) - (m * math.log(m) - m + 0.5 * math.log(2 * math.pi * m))
    m2 = m * m
    return (1 / 12 - (1 / 360 - (1 / 1260 - 1 / (1680 * m2)) / m2) / m2) / m


def log_binomial(n: float, k: float) -> float:
    """ln C(n, k) for integer-like ``0 <= k <= n``.

    Small ``min(k, n-k)`` is summed term by term. Otherwise the Stirling main
    parts are combined in a cancellation-free form so the absolute error stays
    near machine precision even for n around 1e12, which a plain difference of
    three lgamma values cannot achieve.
    """
    if k < 0 or k > n:
        raise DomainError(f"log_binomial needs 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    if k == 0:
        return 0.0
    if k <= 30 and float(k).is_integer():
        kk = int(k)
        return math.fsum(math.log(n - j) for j in range(kk)) - math.lgamma(kk + 1)
    j = n - k
    main = -k * math.log(k / n) - j * math.log1p(-k / n)
    half = 0.5 * math.log(n / (2 * math.pi * k * j))
    return main + half + _lnfact_correction(n) - _lnfact_correction(k) - _lnfact_correction(j)


def bisect_bracket(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
                   max_iter: int = 400) -> tuple[float, float]:
    """Shrink a sign-change bracket of ``f`` to width ``tol``.

    Returns ``(a, b)`` with f(a), f(b) of opposite signs (or one of them 0).
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"f({lo})={flo:g} and f({hi})={fhi:g} share a sign")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of ``f`` on ``[lo, hi]`` by bisection; requires a sign change."""
    a, b = bisect_bracket(f, lo, hi, tol)
    return 0.5 * (a + b)


def newton2(F: Callable[[float, float], tuple[float, float]],
            J: Callable[[float, float], tuple[tuple[float, float], tuple[float, float]]],
            start: tuple[float, float], tol: float = 1e-12, max_iter: int = 100,
            max_halvings: int = 40) -> tuple[float, float]:
    """Damped Newton iteration for a 2x2 system with an analytic Jacobian.

    A full step that does not reduce the sup-norm residual is halved up to
    ``max_halvings`` times. Raises ConvergenceError with the last residual if
    the tolerance is not met.
    """
    x, y = map(float, start)
    f1, f2 = F(x, y)
    res = max(abs(f1), abs(f2))
    for _ in range(max_iter):
        if res <= tol:
            return x, y
        (a, b), (c, d) = J(x, y)
        det = a * d - b * c
        if det == 0 or not math.isfinite(det):
            raise ConvergenceError("singular Jacobian", res)
        dx = (-f1 * d + f2 * b) / det
        dy = (-f2 * a + f1 * c) / det
        step = 1.0
        for _ in range(max_halvings + 1):
            tx, ty = x + step * dx, y + step * dy
            g1, g2 = F(tx, ty)
            tres = max(abs(g1), abs(g2))
            if math.isfinite(tres) and tres < res:
                break
            step *= 0.5
        else:
            raise ConvergenceError("damping could not reduce the residual", res)
        x, y, f1, f2, res = tx, ty, g1, g2, tres
    if res <= tol:
        return x, y
    raise ConvergenceError(f"no convergence after {max_iter} iterations", res)
