"""Exact k-step Fibonacci sequences and the two-repdigit palindrome shape.

Every quantity in this demo is an exact Python integer; the interesting
question is which sequence terms have decimal expansions of the form
d1...d1 d2...d2 d1...d1 with distinct digits and non-empty blocks.
"""

from kfibpal import (
    PalindromeDecomposition,
    decompose_palindrome,
    fib_k,
    fib_stream,
    palindrome_value,
    pow2_palindrome_scan,
    search_solutions,
)

print("The first 12 terms for a few orders k:")
for k in (2, 3, 5, 9):
    print(f"  k={k}: {list(fib_stream(k, 12))}")

print()
print("Up to n = k+1 every term is a power of two, and the first exception")
print("is 2^k - 1:")
for k in (4, 7, 10):
    row = [fib_k(k, n) for n in range(2, k + 3)]
    print(f"  k={k:2d}: {row}   (last = 2^{k} - 1 = {2**k - 1})")

print()
print("Palindromes built from two distinct repdigits:")
for dec in (
    PalindromeDecomposition(4, 6, 1, 1),
    PalindromeDecomposition(5, 9, 1, 1),
    PalindromeDecomposition(1, 0, 2, 3),
):
    print(f"  {dec} -> {palindrome_value(dec)}")

print()
print("Decomposition is unique when it exists (three maximal digit runs):")
for value in (464, 121, 777, 40404, 1100011, 11011):
    print(f"  {value} -> {decompose_palindrome(value)}")

print()
print("No bounded palindrome of this shape is a power of two:")
hits = pow2_palindrome_scan(3, 12)
print(f"  scan over ell <= 3, m <= 12 ({9 * 9 * 3 * 12} candidates): {hits or 'no hits'}")

print()
print("Searching the sequence box k in [2, 60], n in [9, 400]:")
for k, n, value, dec in search_solutions(2, 60, 9, 400):
    print(f"  F({n}) at order {k} = {value} = {dec}")
print("The value 464 at (k, n) = (5, 11) is the only hit; the proof")
print("pipeline (demo 05) certifies there is no other anywhere.")
