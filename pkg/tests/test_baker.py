import math
import random
from fractions import Fraction

import pytest

from kfibpal.baker import (
    MatveevInstance,
    height_bounds_for_gammas,
    height_rational,
    outer_block_cap,
    middle_block_caps,
    large_order_caps,
    log_n_log_k_bridge,
    matveev_bound,
    n_window,
    pow2_window_check,
)
from kfibpal.kfib import fib_stream

LOG9 = math.log(9)


def test_height_rational():
    assert abs(float(height_rational(9, 1)) - LOG9) < 1e-12
    assert height_rational(1, 1).value == 0
    for d1 in range(1, 9):
        assert float(height_rational(d1, 9)) <= 2 * LOG9 + 1e-12
    assert float(height_rational(6, 4)) == pytest.approx(math.log(3), abs=1e-12)
    with pytest.raises(ZeroDivisionError):
        height_rational(1, 0)


def test_height_bounds_first_form():
    for k in (2, 3, 10, 900):
        h1, h2, h3 = height_bounds_for_gammas(k)
        # 10 log k really dominates log 9 + 3 log k + log 9 for k >= 2
        assert float(h1.value) >= 2 * LOG9 + 3 * math.log(k) - 1e-9
        assert h2.value == Fraction(7, 10 * k)
        assert float(h3.value) == pytest.approx(math.log(10), abs=1e-12)
    assert height_bounds_for_gammas(2)[1].value == Fraction(35, 100)


def test_height_bounds_with_ell():
    h1 = height_bounds_for_gammas(5, ell=7)[0]
    expected = 3 * LOG9 + 3 * math.log(5) + 7 * math.log(10) + math.log(2)
    assert float(h1.value) == pytest.approx(expected, rel=1e-12)


def test_height_chain_stays_below_aggregate():
    # with ell at the first-stage cap, the chained height stays below
    # 9.22e12 k^4 (log k)^2 log n
    for k in (2, 5, 50, 900):
        n_bound = middle_block_caps(k)[1]
        ell_cap = outer_block_cap(k, n_bound)
        ell = int(ell_cap)
        chain = height_bounds_for_gammas(k, ell=ell)[0].value
        aggregate = (
            Fraction(922, 100)
            * 10**12
            * k**4
            * Fraction(math.log(k)) ** 2
            * Fraction(math.log(float(n_bound)))
        )
        assert chain < aggregate


def _aggregate_ratio(inst: MatveevInstance, normalizer: float) -> float:
    return float(-matveev_bound(inst)) / normalizer


def test_matveev_aggregates_against_published():
    ln = math.log
    k, n = 2, 9
    # order-k field, three logs: published coefficient 8.4e12
    inst = MatveevInstance(
        3, k, Fraction(n), (Fraction(10 * k) * Fraction(ln(k)), Fraction(7, 10), Fraction(k) * Fraction(ln(10)))
    )
    ratio = _aggregate_ratio(inst, k**4 * ln(k) ** 2 * ln(n))
    assert ratio <= 8.4e12

    # rational field: published coefficient 1.5e12
    inst = MatveevInstance(
        3, 1, Fraction(n), (Fraction(2 * LOG9), Fraction(ln(2)), Fraction(ln(10)))
    )
    assert _aggregate_ratio(inst, ln(n)) <= 1.5e12


def test_matveev_monotone():
    base = MatveevInstance(3, 2, Fraction(9), (Fraction(5), Fraction(1), Fraction(2)))
    bigger_a = MatveevInstance(3, 2, Fraction(9), (Fraction(6), Fraction(1), Fraction(2)))
    bigger_b = MatveevInstance(3, 2, Fraction(19), (Fraction(5), Fraction(1), Fraction(2)))
    bigger_d = MatveevInstance(3, 3, Fraction(9), (Fraction(5), Fraction(1), Fraction(2)))
    assert matveev_bound(bigger_a) < matveev_bound(base)
    assert matveev_bound(bigger_b) < matveev_bound(base)
    assert matveev_bound(bigger_d) < matveev_bound(base)


def test_matveev_b_equal_one_edge():
    inst = MatveevInstance(2, 1, Fraction(1), (Fraction(1), Fraction(1)))
    # (1 + log 1) = 1: value is -1.4 * 30^5 * 2^4.5 * 1 * 1 * 1
    expected = -1.4 * 30**5 * 2**4.5
    assert float(matveev_bound(inst)) == pytest.approx(expected, rel=1e-9)


def test_matveev_validation():
    with pytest.raises(ValueError):
        MatveevInstance(0, 1, Fraction(1), ())
    with pytest.raises(ValueError):
        MatveevInstance(1, 1, Fraction(1), (Fraction(1, 10),))  # below 0.16


def test_n_window():
    assert n_window(1, 1) == (3, 17)
    assert n_window(118, 120) == (356, 1782)
    with pytest.raises(ValueError):
        n_window(0, 1)


def test_window_matches_digit_counts():
    # any term with d digits satisfies d < n < 5d + 2 in the tested range
    for k in range(2, 11):
        for n, value in enumerate(fib_stream(k, 120), start=1):
            if n < 9:
                continue
            digits = len(str(value))
            assert digits < n < 5 * digits + 2, (k, n)


def test_outer_block_cap():
    cap = outer_block_cap(2, 9)
    expected = 4e12 * 2**4 * math.log(2) ** 2 * math.log(9)
    assert float(cap) == pytest.approx(expected, rel=1e-9)
    assert outer_block_cap(3, 9) > cap
    assert outer_block_cap(2, 100) > cap


def test_outer_block_cap_dominates_derivation_at_random_points():
    rng = random.Random(11)
    for _ in range(200):
        k = rng.randint(2, 10**4)
        n = Fraction(rng.randint(9, 10**6)) * 10 ** rng.randint(0, 54)
        outer_block_cap(k, n)  # raises if domination ever fails


def test_middle_block_caps():
    m_cap, n_cap = middle_block_caps(900)
    assert n_cap < Fraction(19, 10) * 10**59
    assert float(n_cap) == pytest.approx(3e31 * 900**8 * math.log(900) ** 5, rel=1e-9)
    m_at = m_cap(Fraction(math.log(9)))
    assert float(m_at) == pytest.approx(3.5e24 * 2**0 * 900**8 * math.log(900) ** 3 * math.log(9) ** 2, rel=1e-9)
    m2, n2 = middle_block_caps(2)
    assert 0 < n2 < n_cap


def test_large_order_caps():
    caps = large_order_caps()
    assert caps.k_cap == 32 * 10**30
    assert caps.n_cap == 67 * 10**291
    assert caps.branch_a_cap <= caps.branch_a_published == 82 * 10**14
    assert caps.branch_b_cap <= caps.branch_b_published == 32 * 10**30
    # the weaker printed chain overshoots the published caps under log base e
    assert caps.loose_chain_a > caps.branch_a_published
    assert caps.loose_chain_b > caps.branch_b_published


def test_bridge_and_window():
    assert log_n_log_k_bridge(901) == 117
    assert float(73 / math.log(901) + 13) < 117
    with pytest.raises(ValueError):
        log_n_log_k_bridge(900)
    assert pow2_window_check(901)
