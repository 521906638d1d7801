"""Certified real arithmetic: directed-rounding intervals over MPFR.

Endpoints are mpfr values.  Every operation rounds the lower endpoint
toward -inf and the upper endpoint toward +inf, so the exact value of an
expression is always contained in the interval computed for it.  That
enclosure property is what the reduction pipeline's floors, logarithms
and root enclosures rely on; nothing in this module ever rounds to
nearest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr, mpz

from . import kfib

__all__ = [
    "RealInterval",
    "CharPoly",
    "DominantRoot",
    "PrecisionError",
    "DomainError",
    "digits_to_bits",
    "alpha",
    "f_k_at",
    "log_enclosure",
    "log_int",
    "binet_residual",
    "pow2_residual_check",
    "floor_scaled",
]

_LOG2_10 = math.log2(10)


class PrecisionError(ArithmeticError):
    """Result is too wide for the requested use; retry with more digits."""


class DomainError(ArithmeticError):
    """Operand outside an operation's domain (log of <= 0, 0 in a divisor, ...)."""


def digits_to_bits(digits: int) -> int:
    return int(digits * _LOG2_10) + 16


@lru_cache(maxsize=1024)
def _cd(bits: int):
    return gmpy2.context(precision=bits, round=gmpy2.RoundDown)


@lru_cache(maxsize=1024)
def _cu(bits: int):
    return gmpy2.context(precision=bits, round=gmpy2.RoundUp)


_MPFR_ZERO = mpfr(0)


def _fr(x) -> Fraction:
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


@dataclass(frozen=True)
class RealInterval:
    """Closed interval [lo, hi] of reals with mpfr endpoints."""

    lo: object
    hi: object
    bits: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_int(v: int, bits: int) -> "RealInterval":
        # mixing in an mpfr forces a rounded mpfr result even for exact ints
        return RealInterval(
            _cd(bits).add(mpz(v), _MPFR_ZERO), _cu(bits).add(mpz(v), _MPFR_ZERO), bits
        )

    @staticmethod
    def from_fraction(v, bits: int) -> "RealInterval":
        v = Fraction(v)
        p, q = mpz(v.numerator), mpz(v.denominator)
        lo = _cd(bits).div(p, q)
        hi = _cu(bits).div(p, q)
        if not isinstance(lo, mpfr):  # exact integer quotient comes back as mpz
            lo = _cd(bits).add(lo, _MPFR_ZERO)
            hi = _cu(bits).add(hi, _MPFR_ZERO)
        return RealInterval(lo, hi, bits)

    @staticmethod
    def point(x, bits: int) -> "RealInterval":
        """Degenerate interval around an exactly representable mpfr value."""
        x = mpfr(x, bits)
        return RealInterval(x, x, bits)

    @staticmethod
    def zero(bits: int) -> "RealInterval":
        return RealInterval.point(0, bits)

    # -- coercion ------------------------------------------------------

    def _coerce(self, other) -> "RealInterval":
        if isinstance(other, RealInterval):
            return other
        if isinstance(other, int):
            return RealInterval.from_int(other, self.bits)
        if isinstance(other, Fraction):
            return RealInterval.from_fraction(other, self.bits)
        raise TypeError(f"cannot mix RealInterval with {type(other)!r}")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        bits = max(self.bits, o.bits)
        return RealInterval(
            _cd(bits).add(self.lo, o.lo), _cu(bits).add(self.hi, o.hi), bits
        )

    __radd__ = __add__

    def __neg__(self):
        # bare -mpfr rounds through the global 53-bit context; negate through
        # the directed contexts so full precision survives
        return RealInterval(
            _cd(self.bits).minus(self.hi), _cu(self.bits).minus(self.lo), self.bits
        )

    def __sub__(self, other):
        o = self._coerce(other)
        bits = max(self.bits, o.bits)
        return RealInterval(
            _cd(bits).sub(self.lo, o.hi), _cu(bits).sub(self.hi, o.lo), bits
        )

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        bits = max(self.bits, o.bits)
        cd, cu = _cd(bits), _cu(bits)
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        lo = min(cd.mul(a, c), cd.mul(a, d), cd.mul(b, c), cd.mul(b, d))
        hi = max(cu.mul(a, c), cu.mul(a, d), cu.mul(b, c), cu.mul(b, d))
        return RealInterval(lo, hi, bits)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.excludes_zero():
            raise DomainError("division by an interval containing 0")
        bits = max(self.bits, o.bits)
        cd, cu = _cd(bits), _cu(bits)
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        lo = min(cd.div(a, c), cd.div(a, d), cd.div(b, c), cd.div(b, d))
        hi = max(cu.div(a, c), cu.div(a, d), cu.div(b, c), cu.div(b, d))
        return RealInterval(lo, hi, bits)

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def pow_int(self, e: int) -> "RealInterval":
        """Integer power of a positive interval (monotone in the base)."""
        if e == 0:
            return RealInterval.from_int(1, self.bits)
        if e < 0:
            return RealInterval.from_int(1, self.bits) / self.pow_int(-e)
        if not self.lo > 0:
            raise DomainError("pow_int needs a strictly positive base interval")
        return RealInterval(
            _cd(self.bits).pow(self.lo, e), _cu(self.bits).pow(self.hi, e), self.bits
        )

    def log(self) -> "RealInterval":
        if not self.lo > 0:
            raise DomainError("log of a non-positive interval")
        return RealInterval(
            _cd(self.bits).log(self.lo), _cu(self.bits).log(self.hi), self.bits
        )

    def sqrt(self) -> "RealInterval":
        if self.lo < 0:
            raise DomainError("sqrt of a negative interval")
        return RealInterval(
            _cd(self.bits).sqrt(self.lo), _cu(self.bits).sqrt(self.hi), self.bits
        )

    def abs(self) -> "RealInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealInterval(
            _MPFR_ZERO, max(_cu(self.bits).minus(self.lo), self.hi), self.bits
        )

    # -- queries ---------------------------------------------------------

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo_fraction() <= x <= self.hi_fraction()

    def is_subset_of(self, lo, hi) -> bool:
        """Strict containment of this interval in the open interval (lo, hi)."""
        return Fraction(lo) < self.lo_fraction() and self.hi_fraction() < Fraction(hi)

    def lo_fraction(self) -> Fraction:
        return _fr(self.lo)

    def hi_fraction(self) -> Fraction:
        return _fr(self.hi)

    def width_fraction(self) -> Fraction:
        return self.hi_fraction() - self.lo_fraction()

    def mid(self):
        """Some representable point inside the interval (not the exact midpoint)."""
        return _cd(self.bits).div(_cd(self.bits).add(self.lo, self.hi), 2)

    def rebits(self, bits: int) -> "RealInterval":
        return RealInterval(
            _cd(bits).add(self.lo, _MPFR_ZERO), _cu(bits).add(self.hi, _MPFR_ZERO), bits
        )

    def __repr__(self):
        return f"RealInterval([{self.lo!r}, {self.hi!r}], bits={self.bits})"

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def log_enclosure(x: RealInterval) -> RealInterval:
    """Natural logarithm of a positive interval."""
    return x.log()


def log_int(n: int, bits: int) -> RealInterval:
    """Natural logarithm of a positive integer, at the given working precision."""
    if n <= 0:
        raise DomainError("log of a non-positive integer")
    return RealInterval(_cd(bits).log(mpz(n)), _cu(bits).log(mpz(n)), bits)


@dataclass(frozen=True)
class CharPoly:
    """x^k - x^(k-1) - ... - x - 1, the recurrence's characteristic polynomial."""

    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("order must be >= 2")

    def eval_fraction(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        acc = x**self.k
        for e in range(self.k):
            acc -= x**e
        return acc

    def companion_interval(self, x: RealInterval) -> RealInterval:
        """(x - 1) * poly(x) = x^(k+1) - 2 x^k + 1, cheap to evaluate for large k."""
        return x.pow_int(self.k) * (x - 2) + 1

    def eval_interval(self, x: RealInterval) -> RealInterval:
        """Polynomial value over an interval that stays away from x = 1."""
        den = x - 1
        if not den.excludes_zero():
            raise DomainError("interval evaluation needs x bounded away from 1")
        return self.companion_interval(x) / den

    def derivative_of_companion(self, x: RealInterval) -> RealInterval:
        """d/dx of x^(k+1) - 2 x^k + 1, i.e. x^(k-1) ((k+1) x - 2k)."""
        return x.pow_int(self.k - 1) * (x * (self.k + 1) - 2 * self.k)


@dataclass(frozen=True)
class DominantRoot:
    """Certified enclosure of the unique root of CharPoly(k) in (1, 2)."""

    k: int
    enclosure: RealInterval

    def localization_ok(self) -> bool:
        lo_bound = Fraction(2) * (1 - Fraction(1, 2**self.k))
        return self.enclosure.is_subset_of(lo_bound, Fraction(2))

    def sign_change_ok(self) -> bool:
        poly = CharPoly(self.k)
        at_lo = poly.eval_interval(RealInterval.point(self.enclosure.lo, self.enclosure.bits))
        at_hi = poly.eval_interval(RealInterval.point(self.enclosure.hi, self.enclosure.bits))
        return at_lo.hi < 0 and at_hi.lo > 0


def _companion_sign(poly: CharPoly, x, bits: int) -> int:
    """Certified sign (-1/0/+1) of the companion polynomial at an mpfr point."""
    val = poly.companion_interval(RealInterval.point(x, bits))
    if val.hi < 0:
        return -1
    if val.lo > 0:
        return 1
    return 0


def _alpha_attempt(k: int, bits: int, target_width: Fraction):
    poly = CharPoly(k)
    cd = _cd(bits)
    # 2 - 2^(1-k) and 2 are exactly representable; the root lies strictly
    # between them and the companion polynomial is increasing there.
    lo = cd.sub(mpfr(2, bits), cd.div(1, mpz(2) ** (k - 1)))
    hi = mpfr(2, bits)
    init_lo, init_hi = lo, hi
    if _companion_sign(poly, lo, bits) >= 0:
        return None
    # g(2) = 1 exactly, no evaluation needed for the upper end.  Both
    # endpoints must move off the initial bracket so the final enclosure
    # sits strictly inside the localization interval.
    for _ in range(80):
        if lo > init_lo and hi < init_hi and _fr(hi) - _fr(lo) < target_width:
            break
        m = cd.div(cd.add(lo, hi), 2)
        s = _companion_sign(poly, m, bits)
        if s == 0:
            return None
        if s < 0:
            lo = m
        else:
            hi = m
    # interval Newton contraction, quadratic once the bracket is tight
    for _ in range(200):
        if _fr(hi) - _fr(lo) < target_width:
            break
        bracket = RealInterval(lo, hi, bits)
        slope = poly.derivative_of_companion(bracket)
        if not slope.lo > 0:
            return None
        m = bracket.mid()
        gm = poly.companion_interval(RealInterval.point(m, bits))
        step = gm / slope
        new_lo = _cd(bits).sub(m, step.hi)
        new_hi = _cu(bits).sub(m, step.lo)
        cand_lo = max(lo, new_lo)
        cand_hi = min(hi, new_hi)
        if cand_lo > cand_hi:
            return None
        moved = False
        if cand_lo > lo and _companion_sign(poly, cand_lo, bits) < 0:
            lo = cand_lo
            moved = True
        if cand_hi < hi and _companion_sign(poly, cand_hi, bits) > 0:
            hi = cand_hi
            moved = True
        if not moved:
            # fall back to one certified bisection step to guarantee progress
            m = cd.div(cd.add(lo, hi), 2)
            s = _companion_sign(poly, m, bits)
            if s == 0:
                return None
            if s < 0:
                lo = m
            else:
                hi = m
    if not _fr(hi) - _fr(lo) < target_width:
        return None
    if not (lo > init_lo and hi < init_hi):
        return None
    return RealInterval(lo, hi, bits)


@lru_cache(maxsize=4096)
def alpha(k: int, prec: int = 60) -> DominantRoot:
    """Certified enclosure of the dominant recurrence root, width < 10^-prec.

    Bisection isolates the root with exact sign certificates from interval
    evaluation; interval Newton then contracts the bracket.  Endpoints keep
    their sign certificates throughout, so the returned bracket provably
    straddles the root.
    """
    if k < 2:
        raise ValueError("order k must be >= 2")
    if prec < 30:
        raise ValueError("need at least 30 digits")
    target = Fraction(1, 10**prec)
    bits = max(digits_to_bits(prec) + 64, k + 64)
    for _ in range(8):
        enclosure = _alpha_attempt(k, bits, target)
        if enclosure is not None:
            root = DominantRoot(k, enclosure)
            if not root.localization_ok():
                raise ArithmeticError(f"root enclosure escaped (2(1-2^-k), 2) for k={k}")
            return root
        bits *= 2
    raise ArithmeticError(f"could not certify root enclosure for k={k} at {prec} digits")


def f_k_at(k: int, x: RealInterval) -> RealInterval:
    """(x - 1) / (2 + (k+1)(x - 2)) over an interval.

    Signals DomainError when the denominator interval touches 0.
    """
    if k < 2:
        raise ValueError("order k must be >= 2")
    den = (x - 2) * (k + 1) + 2
    if not den.excludes_zero():
        raise DomainError("denominator interval contains 0")
    return (x - 1) / den


def binet_residual(k: int, n: int, prec: int) -> RealInterval:
    """Enclosure of F(n) - f_k(root) * root^(n-1), F exact.

    Raises PrecisionError when the enclosure is wider than 1/4, in which
    case the caller should retry with more digits.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    root = alpha(k, prec)
    x = root.enclosure
    dominant = f_k_at(k, x) * x.pow_int(n - 1)
    exact = RealInterval.from_int(kfib.fib_k(k, n), x.bits)
    res = exact - dominant
    if res.width_fraction() >= Fraction(1, 4):
        raise PrecisionError(
            f"residual enclosure too wide at {prec} digits for k={k}, n={n}"
        )
    return res


def pow2_residual_check(k: int, n: int) -> bool:
    """Exact check of |F(n) - 2^(n-2)| < 2^(n-2) * 2 / 2^(k/2).

    The bound is the relative form; the absolute variant without the
    2^(n-2) factor fails at n = k + 2, where the residual equals 1.
    Requires n < 2^(k/2), checked exactly as n^2 < 2^k.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if n * n >= 2**k:
        raise ValueError("requires n < 2^(k/2)")
    delta = kfib.fib_k(k, n) - 2 ** (n - 2)
    # |delta| < 2^(n-1) / 2^(k/2)  <=>  delta^2 * 2^k < 2^(2n-2)
    return delta * delta * 2**k < 2 ** (2 * n - 2)


def floor_scaled(eta: RealInterval, c: int) -> tuple[int, bool]:
    """floor(c * eta) when it is the same at both endpoints.

    Returns (floor, stable).  stable=False means the two endpoint floors
    disagree and the caller must recompute eta at higher precision; that
    is a reported state, not an error.
    """
    lo_n, lo_d = eta.lo.as_integer_ratio()
    hi_n, hi_d = eta.hi.as_integer_ratio()
    f_lo = (c * int(lo_n)) // int(lo_d)
    f_hi = (c * int(hi_n)) // int(hi_d)
    return f_lo, f_lo == f_hi
