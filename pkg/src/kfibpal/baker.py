"""Height bounds, the explicit linear-form lower bound, and the cap lemmas.

All returned numbers are certified one-sided bounds carried as Fractions:
upper bounds for heights and caps, lower (most negative) bounds for the
linear-form estimate.  Interval arithmetic does the rounding; nothing here
trusts floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Optional

from .realnum import RealInterval, digits_to_bits, log_int

__all__ = [
    "HeightValue",
    "MatveevInstance",
    "LargeOrderCaps",
    "height_rational",
    "height_bounds_for_gammas",
    "matveev_bound",
    "n_window",
    "outer_block_cap",
    "middle_block_caps",
    "index_cap_at",
    "large_order_caps",
    "log_n_log_k_bridge",
    "pow2_window_check",
]

_BITS = digits_to_bits(40)


def _iv(x, bits: int = _BITS) -> RealInterval:
    if isinstance(x, RealInterval):
        return x.rebits(bits)
    if isinstance(x, int):
        return RealInterval.from_int(x, bits)
    return RealInterval.from_fraction(Fraction(x), bits)


def _log_up(n: int) -> Fraction:
    return log_int(n, _BITS).hi_fraction()


@dataclass(frozen=True)
class HeightValue:
    """Certified upper bound on the logarithmic height of some quantity."""

    value: Fraction
    description: str

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("heights are non-negative")

    def __float__(self):
        return float(self.value)


def height_rational(p: int, q: int) -> HeightValue:
    """Height of the rational p/q: log max(|p|, q) after reduction."""
    if q == 0:
        raise ZeroDivisionError("zero denominator")
    if q < 0:
        p, q = -p, -q
    g = gcd(p, q)
    p, q = p // g, q // g
    top = max(abs(p), q)
    value = Fraction(0) if top == 1 else _log_up(top)
    return HeightValue(value, f"log max(|{p}|, {q})")


def height_bounds_for_gammas(
    k: int, ell: Optional[int] = None
) -> list[HeightValue]:
    """The three height bounds feeding the A-values of the two main forms.

    Without ell: the bound 10 log k for h(9 f_k(root)/d1) (valid for every
    digit d1 >= 1 once k >= 2), 0.7/k for h(root), and log 10.  With ell:
    the first entry instead follows the chain
        log 9 + 3 log k + log 9 + ell log 10 + log 9 + log 2
    for h(9 f_k(root) / (d1 10^ell - (d1 - d2))).
    """
    if k < 2:
        raise ValueError("need k >= 2")
    log_k = _log_up(k)
    if ell is None:
        first = HeightValue(10 * log_k, "10 log k")
    else:
        if ell < 1:
            raise ValueError("need ell >= 1")
        chain = 3 * _log_up(9) + 3 * log_k + ell * _log_up(10) + _log_up(2)
        first = HeightValue(chain, "3 log 9 + 3 log k + ell log 10 + log 2")
    return [
        first,
        HeightValue(Fraction(7, 10 * k), "0.7 / k"),
        HeightValue(_log_up(10), "log 10"),
    ]


@dataclass(frozen=True)
class MatveevInstance:
    """Inputs of the explicit lower bound for a form in t logarithms.

    A_i must already be certified upper bounds satisfying
    A_i >= max(D h(gamma_i), |log gamma_i|, 0.16); B >= max |b_i|.
    """

    t: int
    d_degree: int
    b_coeff: Fraction
    a_values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.t < 1 or self.d_degree < 1:
            raise ValueError("need t >= 1 and degree >= 1")
        if len(self.a_values) != self.t:
            raise ValueError("need one A per logarithm")
        if self.b_coeff < 1:
            raise ValueError("coefficient bound B must be >= 1")
        if any(a < Fraction(16, 100) for a in self.a_values):
            raise ValueError("every A_i must be >= 0.16")


def matveev_bound(inst: MatveevInstance) -> Fraction:
    """Certified lower bound on log|Gamma| for a nonzero form.

    Evaluates -1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) A_1...A_t
    with outward rounding, so the returned (negative) Fraction is a true
    lower bound.
    """
    t, deg = inst.t, inst.d_degree
    mag = _iv(Fraction(14, 10)) * (30 ** (t + 3)) * (t**4) * _iv(t).sqrt()
    mag = mag * (deg * deg) * (1 + _iv(deg).log()) * (1 + _iv(inst.b_coeff).log())
    for a in inst.a_values:
        mag = mag * _iv(a)
    return -mag.hi_fraction()


def n_window(ell: int, m: int) -> tuple[int, int]:
    """Open interval of admissible indices n for given block lengths."""
    if ell < 1 or m < 1:
        raise ValueError("block lengths must be >= 1")
    digits = 2 * ell + m
    return digits, 5 * digits + 2


def outer_block_cap(k: int, n_bound) -> Fraction:
    """Closed-form cap 4e12 k^4 (log k)^2 log n on the outer block length.

    Also re-derives the cap from the linear-form bound plus the comparison
    ell log 10 - log 11 < |bound| and checks the closed form dominates it.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    n_bound = Fraction(n_bound)
    if n_bound < 9:
        raise ValueError("need n bound >= 9")
    log_k = _iv(k).log()
    log_n = _iv(n_bound).log()
    closed = (_iv(4 * 10**12) * k**4 * log_k.pow_int(2) * log_n).hi_fraction()
    inst = MatveevInstance(
        t=3,
        d_degree=k,
        b_coeff=n_bound,
        a_values=(10 * k * _log_up(k), Fraction(7, 10), k * _log_up(10)),
    )
    derived = ((-matveev_bound(inst)) + _log_up(11)) / log_int(10, _BITS).lo_fraction()
    if closed < derived:
        raise ArithmeticError("closed-form cap fails to dominate the derivation")
    return closed


def middle_block_caps(k: int) -> tuple[Callable[[Fraction], Fraction], Fraction]:
    """Middle-block cap as a function of log n, plus the resolved index cap.

    The index cap 3e31 k^8 (log k)^5 must dominate the fixed point of
    x -> 2.2e25 k^8 (log k)^3 (log x)^2, which is re-verified by iteration.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    log_k = _iv(k).log()
    base = _iv(Fraction(35, 10) * 10**24) * k**8 * log_k.pow_int(3)

    def m_cap(log_n: Fraction) -> Fraction:
        return (base * _iv(log_n).pow_int(2)).hi_fraction()

    n_cap = (_iv(3 * 10**31) * k**8 * log_k.pow_int(5)).hi_fraction()
    coeff = (_iv(Fraction(22, 10) * 10**25) * k**8 * log_k.pow_int(3)).hi_fraction()
    fix = _fixed_point(lambda x: coeff * _iv(x).log().pow_int(2).hi_fraction())
    if fix > n_cap:
        raise ArithmeticError("index cap fails to dominate its fixed point")
    return m_cap, n_cap


def index_cap_at(k: int) -> Fraction:
    """Just the resolved index cap from the middle-block lemma."""
    return middle_block_caps(k)[1]


def _fixed_point(map_fn: Callable[[Fraction], Fraction], x0: Fraction = Fraction(10)) -> Fraction:
    """Certified cap for x < map(x) with an increasing, slowly growing map.

    Iterates upward to the fixed point, inflates by 1%, and checks the
    inflated cap lies beyond every solution (map(cap) <= cap).
    """
    x = max(map_fn(x0), x0)
    for _ in range(500):
        nxt = map_fn(x)
        if nxt <= x * Fraction(1_000_001, 1_000_000):
            break
        x = nxt
    cap = x * Fraction(101, 100)
    cap = Fraction(cap.numerator // cap.denominator + 1)
    if map_fn(cap) > cap:
        raise ArithmeticError("cap does not close the inequality")
    if map_fn(2 * cap) > 2 * cap:
        raise ArithmeticError("cap closure not stable at twice the cap")
    return cap


@dataclass(frozen=True)
class LargeOrderCaps:
    """Published order/index caps for the large-k branch, plus the audit data."""

    k_cap: int
    n_cap: int
    branch_a_cap: Fraction  # certified resolution of k < 4.4e12 (73 + 13 log k)
    branch_b_cap: Fraction  # certified resolution of k < 2.4e24 (73 + 13 log k)^2
    branch_a_published: int
    branch_b_published: int
    # what the weaker printed chain (117 log k in place of 73 + 13 log k)
    # resolves to under the natural logarithm; exceeds the published caps
    loose_chain_a: Fraction
    loose_chain_b: Fraction


def large_order_caps() -> LargeOrderCaps:
    """Certify k < 3.2e31 and n < 6.7e292 for the large-k case.

    The bridge log n < 73 + 13 log k (valid for k > 900 given the index cap
    of middle_block_caps) turns the two branch inequalities
        k < 4.4e12 log n   and   k < 2.4e24 (log n)^2
    into fixed-point problems whose certified resolutions sit below the
    published branch values 8.2e15 and 3.2e31; the index cap then follows
    by monotone evaluation at k = 3.2e31.  The weaker bridge log n < 117
    log k does NOT resolve to the published values under the natural
    logarithm; its resolutions are recorded for the audit trail.
    """
    if not _bridge_holds(901):
        raise ArithmeticError("log n bridge fails at k = 901")

    def bridged(x: Fraction) -> Fraction:
        return 73 + 13 * _iv(x).log().hi_fraction()

    cap_a = _fixed_point(lambda x: Fraction(44, 10) * 10**12 * bridged(x))
    cap_b = _fixed_point(lambda x: Fraction(24, 10) * 10**24 * bridged(x) ** 2)
    pub_a = 82 * 10**14
    pub_b = 32 * 10**30
    if cap_a > pub_a or cap_b > pub_b:
        raise ArithmeticError("certified branch caps exceed the published ones")
    k_cap = pub_b
    n_pub = 67 * 10**291
    n_at_cap = (_iv(3 * 10**31) * _iv(k_cap).pow_int(8) * _iv(k_cap).log().pow_int(5)).hi_fraction()
    if n_at_cap > n_pub:
        raise ArithmeticError("published index cap too small for the order cap")
    loose_a = _fixed_point(lambda x: Fraction(53, 10) * 10**14 * _iv(x).log().hi_fraction())
    loose_b = _fixed_point(
        lambda x: Fraction(33, 10) * 10**28 * _iv(x).log().pow_int(2).hi_fraction()
    )
    return LargeOrderCaps(
        k_cap=k_cap,
        n_cap=n_pub,
        branch_a_cap=cap_a,
        branch_b_cap=cap_b,
        branch_a_published=pub_a,
        branch_b_published=pub_b,
        loose_chain_a=loose_a,
        loose_chain_b=loose_b,
    )


def _bridge_holds(k_min: int) -> bool:
    # need log(3e31) + 8 log k + 5 log log k <= 73 + 13 log k for k >= k_min,
    # i.e. 5 (log k - log log k) + 73 - log(3e31) >= 0; the left side is
    # increasing in k, so checking the smallest k suffices
    lk = _iv(k_min).log()
    lhs = _iv(3 * 10**31).log() + 8 * lk + 5 * lk.log()
    rhs = 73 + 13 * lk.lo_fraction()
    return lhs.hi_fraction() <= rhs


def log_n_log_k_bridge(k_min: int) -> Fraction:
    """Validated coefficient for collapsing 73 + 13 log k into c log k."""
    if k_min <= 900:
        raise ValueError("bridge is stated for k > 900")
    lk = _iv(k_min).log()
    ratio = (73 / lk + 13).hi_fraction()
    if ratio >= 117:
        raise ArithmeticError("bridge coefficient exceeds 117")
    return Fraction(117)


def pow2_window_check(k_min: int = 901) -> bool:
    """Check 3e31 k^8 (log k)^5 < 2^(k/2) for all k >= k_min.

    Verified at k_min, then propagated by comparing derivatives of the
    logarithms: d/dk of the left log is 8/k + 5/(k log k), decreasing, and
    already below log(2)/2 at k_min.
    """
    lk = _iv(k_min).log()
    lhs = _iv(3 * 10**31).log() + 8 * lk + 5 * lk.log()
    rhs = _iv(Fraction(k_min, 2)) * log_int(2, _BITS)
    if not lhs.hi_fraction() < rhs.lo_fraction():
        return False
    slope = Fraction(8, k_min) + Fraction(5, k_min) / lk.lo_fraction()
    return slope < log_int(2, _BITS).lo_fraction() / 2
