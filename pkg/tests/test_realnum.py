from fractions import Fraction
from math import isqrt

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kfibpal.kfib import fib_k
from kfibpal.realnum import (
    CharPoly,
    DomainError,
    PrecisionError,
    RealInterval,
    alpha,
    binet_residual,
    digits_to_bits,
    f_k_at,
    floor_scaled,
    log_enclosure,
    log_int,
    pow2_residual_check,
)

BITS = digits_to_bits(60)

fractions = st.fractions(
    min_value=Fraction(-1000), max_value=Fraction(1000), max_denominator=997
)


@given(fractions, fractions)
@settings(max_examples=200, deadline=None)
def test_add_sub_mul_enclose_exact(a, b):
    ia = RealInterval.from_fraction(a, BITS)
    ib = RealInterval.from_fraction(b, BITS)
    assert (ia + ib).contains(a + b)
    assert (ia - ib).contains(a - b)
    assert (ia * ib).contains(a * b)


@given(fractions, fractions.filter(lambda x: abs(x) > Fraction(1, 100)))
@settings(max_examples=200, deadline=None)
def test_div_encloses_exact(a, b):
    ia = RealInterval.from_fraction(a, BITS)
    ib = RealInterval.from_fraction(b, BITS)
    assert (ia / ib).contains(a / b)


def test_negation_keeps_full_precision():
    # bare mpfr negation would silently round to the global 53-bit context
    bits = digits_to_bits(950)
    residue = (log_int(18, bits) - log_int(9, bits)) + (-log_int(2, bits))
    assert abs(residue.lo_fraction()) < Fraction(1, 10**900)
    assert abs(residue.hi_fraction()) < Fraction(1, 10**900)


def test_log_examples():
    one = RealInterval.from_int(1, BITS)
    l1 = log_enclosure(one)
    assert l1.contains(0) and l1.width_fraction() == 0
    l10 = log_enclosure(RealInterval.from_int(10, BITS))
    mpmath.mp.dps = 80
    ref = Fraction(str(mpmath.log(10)))
    assert l10.contains(ref)
    assert l10.width_fraction() < Fraction(1, 10**55)
    # an interval straddling e must take log to an interval containing 1
    e_lo = Fraction(str(mpmath.mpf(mpmath.e) - mpmath.mpf("1e-40")))
    e_hi = Fraction(str(mpmath.mpf(mpmath.e) + mpmath.mpf("1e-40")))
    around_e = RealInterval.from_fraction(e_lo, BITS) + RealInterval.from_fraction(
        e_hi - e_lo, BITS
    ) * RealInterval(
        RealInterval.from_int(0, BITS).lo, RealInterval.from_int(1, BITS).hi, BITS
    )
    assert log_enclosure(around_e).contains(1)
    with pytest.raises(DomainError):
        log_enclosure(RealInterval.from_int(0, BITS))


def test_alpha_golden_ratio():
    root = alpha(2, 40)
    # (1 + sqrt 5)/2 bracketed by integer square roots
    lo = Fraction(10**50 + isqrt(5 * 10**100), 2 * 10**50)
    hi = Fraction(10**50 + isqrt(5 * 10**100) + 1, 2 * 10**50)
    assert root.enclosure.lo_fraction() <= hi
    assert root.enclosure.hi_fraction() >= lo
    assert root.enclosure.width_fraction() < Fraction(1, 10**40)
    assert root.sign_change_ok()


def test_alpha_localization_and_certificates():
    for k in (2, 3, 5, 10, 25, 50):
        root = alpha(k, 60)
        assert root.localization_ok()
        assert root.sign_change_ok()
        poly = CharPoly(k)
        at_lo = poly.eval_interval(RealInterval.point(root.enclosure.lo, root.enclosure.bits))
        at_hi = poly.eval_interval(RealInterval.point(root.enclosure.hi, root.enclosure.bits))
        assert at_lo.hi < 0 < at_hi.lo


def test_alpha_monotone_in_k():
    prev = None
    for k in range(2, 51):
        enc = alpha(k, 60).enclosure
        if prev is not None:
            assert prev.hi < enc.lo
        prev = enc


def test_alpha_preconditions():
    with pytest.raises(ValueError):
        alpha(1, 60)
    with pytest.raises(ValueError):
        alpha(2, 10)


def test_charpoly_matches_direct_evaluation():
    poly = CharPoly(5)
    for x in (Fraction(3, 2), Fraction(19, 10), Fraction(7, 4)):
        direct = poly.eval_fraction(x)
        iv = poly.eval_interval(RealInterval.from_fraction(x, BITS))
        assert iv.contains(direct)


def test_f_k_values():
    point2 = RealInterval.from_int(2, BITS)
    half = f_k_at(5, point2)
    assert half.contains(Fraction(1, 2)) and half.width_fraction() == 0
    enc = f_k_at(2, alpha(2, 40).enclosure)
    # oracle: (x - 1)/(3x - 4) is decreasing, so bracketing phi brackets it
    assert enc.is_subset_of(Fraction(1, 2), Fraction(3, 4))
    phi_lo = Fraction(10**60 + isqrt(5 * 10**120), 2 * 10**60)
    phi_hi = phi_lo + Fraction(1, 2 * 10**60)
    f_lo = (phi_hi - 1) / (3 * phi_hi - 4)
    f_hi = (phi_lo - 1) / (3 * phi_lo - 4)
    assert enc.lo_fraction() <= f_hi and enc.hi_fraction() >= f_lo
    for k in (2, 3, 7, 20, 100):
        assert f_k_at(k, alpha(k, 60).enclosure).is_subset_of(Fraction(1, 2), Fraction(3, 4))


def test_f_k_domain_error():
    # denominator 2 + (k+1)(x-2) vanishes at x = 2 - 2/(k+1)
    k = 4
    bad = RealInterval.from_fraction(Fraction(2) - Fraction(2, k + 1), BITS)
    with pytest.raises(DomainError):
        f_k_at(k, bad)


def test_growth_envelope():
    # alpha^(n-2) <= F(n) <= alpha^(n-1), checked against the enclosure ends
    for k in range(2, 11):
        enc = alpha(k, 60).enclosure
        for n in range(2, 61):
            value = fib_k(k, n)
            low = enc.pow_int(n - 2).lo_fraction() if n > 2 else Fraction(1)
            high = enc.pow_int(n - 1).hi_fraction()
            assert low <= value <= high, (k, n)


def test_binet_residual_small_cases():
    for k, n in ((2, 10), (3, 15), (2, 2)):
        res = binet_residual(k, n, 40)
        assert res.abs().hi_fraction() < Fraction(1, 2)


def test_binet_residual_precision_signal():
    with pytest.raises(PrecisionError):
        binet_residual(2, 600, 30)


def test_pow2_residual():
    assert fib_k(20, 22) == 2**20 - 1
    assert pow2_residual_check(20, 22)
    assert fib_k(20, 21) == 2**19
    assert pow2_residual_check(20, 21)
    assert pow2_residual_check(12, 30)
    with pytest.raises(ValueError):
        pow2_residual_check(10, 40)  # 40^2 >= 2^10


def test_floor_scaled():
    assert floor_scaled(RealInterval.from_fraction(Fraction(1, 2), BITS), 10) == (5, True)
    l10 = log_int(10, digits_to_bits(50))
    assert floor_scaled(l10, 10**10) == (23025850929, True)
    wide = RealInterval.from_fraction(Fraction(1, 2), BITS) + RealInterval(
        RealInterval.from_int(0, BITS).lo,
        RealInterval.from_fraction(Fraction(1, 1000), BITS).hi,
        BITS,
    )
    value, stable = floor_scaled(wide, 10**6)
    assert not stable


def test_floor_stability_under_more_precision():
    for prec in (60, 160):
        pass
    f60 = floor_scaled(log_int(7, digits_to_bits(60)), 10**40)
    f160 = floor_scaled(log_int(7, digits_to_bits(160)), 10**40)
    assert f60 == f160 and f60[1]


def test_negative_floor_rounds_toward_minus_infinity():
    iv = -log_int(2, BITS)
    f, stable = floor_scaled(iv, 10)
    assert stable and f == -7  # floor(-6.93...) = -7
