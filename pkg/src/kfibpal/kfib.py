"""Exact k-step Fibonacci sequences and repdigit-palindrome structure.

Everything here is plain big-integer arithmetic: sequence generation,
the three-block palindrome shape d1...d1 d2...d2 d1...d1 (d1 != d2,
both block lengths >= 1), and the finite searches the proof pipeline
relies on.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import groupby
from typing import Iterator, Optional

__all__ = [
    "PalindromeDecomposition",
    "DivisibilityReport",
    "fib_k",
    "fib_stream",
    "palindrome_value",
    "decompose_palindrome",
    "pow2_palindrome_scan",
    "verify_divisibility_elimination",
    "search_solutions",
    "worker_count",
]

WORKERS_ENV = "KFIBPAL_WORKERS"


def worker_count() -> int:
    """Worker count for partitionable sweeps, from the environment (default 1)."""
    try:
        n = int(os.environ.get(WORKERS_ENV, "1"))
    except ValueError:
        return 1
    return max(1, n)


@dataclass(frozen=True)
class PalindromeDecomposition:
    """Digits and block lengths of a two-repdigit palindrome.

    The represented value is d1 repeated ell times, then d2 repeated m
    times, then d1 repeated ell times again.
    """

    d1: int
    d2: int
    ell: int
    m: int

    def __post_init__(self):
        if not 1 <= self.d1 <= 9:
            raise ValueError("leading digit d1 must be in 1..9")
        if not 0 <= self.d2 <= 9:
            raise ValueError("middle digit d2 must be in 0..9")
        if self.d1 == self.d2:
            raise ValueError("digits must be distinct")
        if self.ell < 1 or self.m < 1:
            raise ValueError("block lengths must be >= 1")

    @property
    def digit_count(self) -> int:
        return 2 * self.ell + self.m


def _check_order(k: int) -> None:
    if k < 2:
        raise ValueError(f"recurrence order k must be >= 2, got {k}")


def fib_k(k: int, n: int) -> int:
    """n-th term of the order-k Fibonacci recurrence.

    Initial values are 0 at indices 2-k..0 and 1 at index 1; every later
    term is the sum of the preceding k terms.  Valid for n >= 2 - k.
    """
    _check_order(k)
    if n < 2 - k:
        raise ValueError(f"index n must be >= 2 - k = {2 - k}, got {n}")
    if n <= 0:
        return 0
    if n == 1:
        return 1
    last = 1
    for value in fib_stream(k, n):
        last = value
    return last


def fib_stream(k: int, n_max: int) -> Iterator[int]:
    """Yield terms 1..n_max of the order-k sequence.

    Uses the sliding-window identity F(n) = 2 F(n-1) - F(n-1-k), which
    follows from subtracting consecutive k-term sums; fib_k-by-summation
    must agree with it and the tests check that they do.
    """
    _check_order(k)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    # window holds the k+1 terms F(n-1-k)..F(n-1) needed for the identity.
    window = deque([0] * (k - 1) + [1])
    yield 1
    if n_max == 1:
        return
    # F(2) is a plain k-term sum; afterwards the two-term identity applies.
    current = sum(window)
    yield current
    window.append(current)
    for _ in range(3, n_max + 1):
        current = 2 * window[-1] - window[0]
        yield current
        window.append(current)
        window.popleft()


def _fib_sum_reference(k: int, n_max: int) -> list[int]:
    """Direct k-term-sum evaluation, kept as an independent cross-check."""
    _check_order(k)
    values = [0] * (k - 1) + [1]
    while len(values) < n_max + (k - 1):
        values.append(sum(values[-k:]))
    return values[k - 1 :]


def _repdigit(d: int, length: int) -> int:
    return d * (10**length - 1) // 9


def palindrome_value(dec: PalindromeDecomposition) -> int:
    """Integer value of the three-block palindrome."""
    outer = _repdigit(dec.d1, dec.ell)
    middle = _repdigit(dec.d2, dec.m)
    return outer * 10 ** (dec.ell + dec.m) + middle * 10**dec.ell + outer


def decompose_palindrome(n: int) -> Optional[PalindromeDecomposition]:
    """Recover the (d1, d2, ell, m) decomposition of n, if one exists.

    A decomposable number has exactly three maximal digit runs with equal
    first and last runs, which makes the decomposition unique; numbers
    with fewer than three digits never qualify.
    """
    if n < 0:
        raise ValueError("expected a non-negative integer")
    s = str(n)
    if len(s) < 3:
        return None
    runs = [(ch, sum(1 for _ in grp)) for ch, grp in groupby(s)]
    if len(runs) != 3:
        return None
    (c1, a), (c2, b), (c3, c) = runs
    if c1 != c3 or a != c:
        return None
    return PalindromeDecomposition(int(c1), int(c2), a, b)


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def pow2_palindrome_scan(
    max_ell: int, max_m: int
) -> list[tuple[int, PalindromeDecomposition]]:
    """All two-repdigit palindromes with ell <= max_ell, m <= max_m that are powers of 2."""
    if max_ell < 1 or max_m < 1:
        raise ValueError("block length bounds must be >= 1")
    hits = []
    for d1 in range(1, 10):
        for d2 in range(10):
            if d1 == d2:
                continue
            for ell in range(1, max_ell + 1):
                for m in range(1, max_m + 1):
                    dec = PalindromeDecomposition(d1, d2, ell, m)
                    value = palindrome_value(dec)
                    if _is_power_of_two(value):
                        hits.append((value, dec))
    hits.sort(key=lambda t: t[0])
    return hits


@dataclass(frozen=True)
class DivisibilityReport:
    """Outcome of the exhaustive modular checks behind the small-index case split."""

    checked_mod16: int
    checked_mod2_14: int
    counterexamples: tuple[tuple, ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def verify_divisibility_elimination() -> DivisibilityReport:
    """Exhaustively confirm the two divisibility facts behind the case split.

    (a) 16 never divides d1 * (10^ell - 1) for d1 in 1..9, ell in 4..40:
        10^ell - 1 is odd and d1 < 16, so a power-of-two term congruent to
        it mod 10^ell would be impossible once 16 | 10^ell.
    (b) 2^14 never divides (d1 - d2) * 10^ell - d1 for distinct digits and
        ell in 1..3: the value is nonzero and below 2^14 in absolute value.
    """
    bad = []
    checked_a = 0
    for d1 in range(1, 10):
        for ell in range(4, 41):
            checked_a += 1
            if d1 * (10**ell - 1) % 16 == 0:
                bad.append(("mod16", d1, ell))
    checked_b = 0
    for d1 in range(1, 10):
        for d2 in range(10):
            if d1 == d2:
                continue
            for ell in range(1, 4):
                checked_b += 1
                value = (d1 - d2) * 10**ell - d1
                if value == 0 or abs(value) >= 2**14 or value % 2**14 == 0:
                    bad.append(("mod2^14", d1, d2, ell, value))
    return DivisibilityReport(checked_a, checked_b, tuple(bad))


def _search_k_range(args: tuple[int, int, int, int]) -> list[tuple[int, int, int, PalindromeDecomposition]]:
    k_lo, k_hi, n_lo, n_hi = args
    found = []
    for k in range(k_lo, k_hi + 1):
        for n, value in enumerate(fib_stream(k, n_hi), start=1):
            if n < n_lo:
                continue
            s = str(value)
            # cheap filters: three digits, equal first/last digit, exactly
            # two distinct digits overall
            if len(s) < 3 or s[0] != s[-1] or len(set(s)) != 2:
                continue
            dec = decompose_palindrome(value)
            if dec is not None:
                found.append((k, n, value, dec))
    return found


def search_solutions(
    k_lo: int, k_hi: int, n_lo: int, n_hi: int
) -> list[tuple[int, int, int, PalindromeDecomposition]]:
    """All (k, n) in the box whose sequence value is a two-repdigit palindrome.

    Results are sorted by (k, n).  The sweep partitions cleanly by k, so a
    KFIBPAL_WORKERS > 1 environment setting fans the k range out to a
    process pool; results are identical either way.
    """
    if not 2 <= k_lo <= k_hi:
        raise ValueError("need 2 <= k_lo <= k_hi")
    if n_lo < 9:
        raise ValueError("palindromes of this shape need n >= 9")
    if n_hi < n_lo:
        return []
    workers = worker_count()
    if workers <= 1 or k_hi - k_lo < 2 * workers:
        found = _search_k_range((k_lo, k_hi, n_lo, n_hi))
    else:
        span = k_hi - k_lo + 1
        chunk = -(-span // workers)
        jobs = []
        start = k_lo
        while start <= k_hi:
            jobs.append((start, min(start + chunk - 1, k_hi), n_lo, n_hi))
            start += chunk
        found = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_search_k_range, jobs):
                found.extend(part)
    found.sort(key=lambda t: (t[0], t[1]))
    return found
