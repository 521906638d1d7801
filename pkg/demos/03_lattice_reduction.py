"""All-integer lattice reduction and the scaled-logarithm bound.

A linear form (n-1) log(root) - (2l+m) log 10 + log(9 f/d1) that is tiny
for some admissible coefficients would force the corresponding lattice to
contain a short vector.  Reducing the lattice and bounding its minimum
from below therefore bounds how small the form can get, which caps the
exponent l.  Everything is exact: integer LLL, rational Gram-Schmidt,
rational acceptance tests.
"""

from fractions import Fraction
from itertools import product

from kfibpal import (
    IntegerBasis,
    ReductionProblem,
    deweger_bound,
    gram_schmidt,
    is_reduced,
    lattice_min_lower_bound,
    lll_reduce,
)
from kfibpal.realnum import alpha, digits_to_bits, f_k_at, log_int

print("A small worked example:")
basis = IntegerBasis.from_columns([[201, 37], [1648, 296]])
print(f"  input columns:   {basis.cols}")
red = lll_reduce(basis)
print(f"  reduced columns: {red.cols}  (is_reduced: {is_reduced(red)})")

best = min(
    sum(x * x for x in (a * red.cols[0][i] + b * red.cols[1][i] for i in range(2)))
    for a, b in product(range(-20, 21), repeat=2)
    if (a, b) != (0, 0)
)
print(f"  shortest vector over the coefficient box [-20,20]^2: norm^2 = {best}")
print(f"  first reduced vector norm^2 = {sum(x * x for x in red.cols[0])}")

mb = lattice_min_lower_bound(red, [0, 0])
print(f"  certified minimum lower bound delta^2 = {mb.delta_sq} (<= {best})")

print()
print("A real reduction instance (order k = 2, digit d1 = 1):")
prec = 240
bits = digits_to_bits(prec)
root = alpha(2, prec).enclosure.rebits(bits)
etas = (root.log(), -log_int(10, bits), (f_k_at(2, root) * 9).log())
n_bound = 2 * 10**59
for c_exp in (178, 179):
    problem = ReductionProblem(
        etas=etas,
        c=21 * 10**(c_exp - 1),
        x_bounds=(n_bound, n_bound, 1),
        c3=Fraction(33, 2),
        c4=log_int(10, digits_to_bits(60)),
        c4_label="log10",
    )
    out = deweger_bound(problem)
    status = f"H <= {out.h_bound}" if out.condition_ok else "condition failed, raise C"
    print(f"  C = 2.1e{c_exp}: {status}")
print("The failed first attempt is expected: the acceptance test needs the")
print("lattice minimum to clear sqrt(S + (2T)^2), and the determinant at the")
print("smaller scale is simply too small.  One decade more does it, and the")
print("resulting bound caps the outer block length l for this (k, d1).")
