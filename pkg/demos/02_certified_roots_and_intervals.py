"""Certified enclosures: dominant roots, interval logs, stable floors.

The reduction machinery needs real numbers it can trust: every endpoint is
rounded outward, so an enclosure [lo, hi] provably contains the exact
value.  This demo shows the dominant root of x^k - x^(k-1) - ... - 1, the
weight function feeding the dominant-term formula, and the floor-stability
notion that makes scaled logarithms safe to put into integer lattices.
"""

from fractions import Fraction

from kfibpal import alpha, binet_residual, f_k_at, fib_k, floor_scaled
from kfibpal.realnum import digits_to_bits, log_int

print("Dominant roots, certified to 40 digits (they increase toward 2):")
for k in (2, 3, 5, 10, 50):
    enc = alpha(k, 40).enclosure
    print(f"  k={k:3d}: {str(enc.lo)[:46]}  width < 1e-40")

print()
print("The weight f_k at the root always lies strictly inside (1/2, 3/4):")
for k in (2, 5, 20, 100):
    enc = f_k_at(k, alpha(k, 40).enclosure)
    print(f"  k={k:3d}: [{float(enc.lo):.12f}, {float(enc.hi):.12f}]")

print()
print("Dominant-term residuals |F(n) - f_k(root) root^(n-1)| stay below 1/2:")
for k, n in ((2, 10), (3, 15), (5, 11), (10, 100)):
    res = binet_residual(k, n, 60).abs()
    print(f"  k={k:2d}, n={n:3d}: residual <= {float(res.hi):.6f}   (F = {fib_k(k, n)})")

print()
print("Scaled floors: floor(C * eta) is accepted only when both interval")
print("endpoints give the same integer.")
bits = digits_to_bits(50)
ln10 = log_int(10, bits)
value, stable = floor_scaled(ln10, 10**10)
print(f"  floor(1e10 * log 10) = {value} (stable: {stable})")

coarse = log_int(10, digits_to_bits(6))
value, stable = floor_scaled(coarse, 10**12)
print(f"  at only 6 digits of precision, scale 1e12: stable = {stable}")
print("  -> the caller must recompute the logarithm at higher precision;")
print("     an unstable floor is a reported state, never a wrong lattice.")
