"""From height bounds to explicit caps on block lengths, index and order.

The explicit lower bound for linear forms in logarithms turns height data
into a (gigantic but finite) first cap; chaining the two digit-block forms
collapses everything to caps that a computer can sweep.
"""

import math
from fractions import Fraction

from kfibpal import (
    MatveevInstance,
    height_bounds_for_gammas,
    height_rational,
    outer_block_cap,
    middle_block_caps,
    large_order_caps,
    matveev_bound,
    n_window,
)

print("Logarithmic heights of the rational inputs:")
for p, q in ((9, 1), (4, 9), (10, 1)):
    print(f"  h({p}/{q}) <= {float(height_rational(p, q)):.6f}")

print()
print("Height bounds feeding the A-values (order k = 2):")
for h in height_bounds_for_gammas(2):
    print(f"  {float(h.value):.6f}   [{h.description}]")

print()
print("The explicit lower bound at the worst point (k=2, n=9):")
inst = MatveevInstance(
    t=3,
    d_degree=2,
    b_coeff=Fraction(9),
    a_values=(Fraction(20 * math.log(2)), Fraction(7, 10), Fraction(2 * math.log(10))),
)
bound = matveev_bound(inst)
print(f"  log|Gamma| > {float(bound):.4e}")
print(f"  normalized by k^4 (log k)^2 log n: {float(-bound) / (16 * math.log(2)**2 * math.log(9)):.4e}")

print()
print("Index window from digit counts: 2l + m < n < 5(2l + m) + 2")
for ell, m in ((1, 1), (118, 120)):
    print(f"  l={ell:3d}, m={m:3d}: n in {n_window(ell, m)}")

print()
print("The cap cascade at order k = 900:")
m_cap, n_cap = middle_block_caps(900)
print(f"  index cap:        n < {float(n_cap):.4e}  (below 1.9e59)")
print(f"  outer-block cap:  l < {float(outer_block_cap(900, n_cap)):.4e}")

print()
print("For k > 900 the caps close over every order at once:")
caps = large_order_caps()
print(f"  k < {caps.k_cap:.3e} and n < {float(Fraction(caps.n_cap)):.3e}")
print(f"  certified branch fixed points: {float(caps.branch_a_cap):.3e}, {float(caps.branch_b_cap):.3e}")
print("  (both sit below the published caps, which is what certifies them)")
