import random
from fractions import Fraction

import pytest

from kfibpal.lattice import (
    FloorInstabilityError,
    IntegerBasis,
    ReductionProblem,
    build_approx_lattice,
    deweger_bound,
    gram_schmidt,
    is_reduced,
    lattice_min_lower_bound,
    lll_reduce,
    sqrt_lower,
    sqrt_upper,
)
from kfibpal.lattice import _solve_fraction
from kfibpal.realnum import RealInterval, alpha, digits_to_bits, f_k_at, log_int

BITS = digits_to_bits(60)


def random_basis(rng, dim, span=50):
    while True:
        cols = [[rng.randint(-span, span) for _ in range(dim)] for _ in range(dim)]
        basis = IntegerBasis.from_columns(cols)
        if basis.determinant() != 0:
            return basis


def brute_min_sq(basis, box):
    dim = basis.dim
    best = None
    ranges = [range(-box, box + 1)] * dim
    from itertools import product

    for coeffs in product(*ranges):
        if not any(coeffs):
            continue
        vec = [
            sum(coeffs[j] * basis.cols[j][i] for j in range(dim)) for i in range(dim)
        ]
        norm = sum(x * x for x in vec)
        if best is None or norm < best:
            best = norm
    return best


def same_lattice(b1, b2):
    transform_cols = []
    for j in range(b2.dim):
        col = _solve_fraction(b1, list(b2.cols[j]))
        if any(x.denominator != 1 for x in col):
            return False
        transform_cols.append([int(x) for x in col])
    det = IntegerBasis.from_columns(transform_cols).determinant()
    return abs(det) == 1


def test_gram_schmidt_identity():
    basis = IntegerBasis.from_columns([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    gso = gram_schmidt(basis)
    assert all(gso.mu[i][j] == 0 for i in range(3) for j in range(i))
    assert gso.bstar_norms_sq() == [1, 1, 1]


def test_gram_schmidt_hand_example():
    gso = gram_schmidt(IntegerBasis.from_columns([[1, 1], [2, 0]]))
    assert gso.bstar[0] == (1, 1)
    assert gso.mu[1][0] == 1
    assert gso.bstar[1] == (1, -1)


def test_gram_schmidt_norm_product_is_determinant():
    rng = random.Random(7)
    for _ in range(50):
        basis = random_basis(rng, 3)
        gso = gram_schmidt(basis)
        prod = Fraction(1)
        for ns in gso.bstar_norms_sq():
            prod *= ns
        assert prod == basis.determinant() ** 2


def test_gram_schmidt_rejects_singular():
    with pytest.raises(ValueError):
        gram_schmidt(IntegerBasis.from_columns([[1, 2], [2, 4]]))


def test_is_reduced_basics():
    assert is_reduced(IntegerBasis.from_columns([[1, 0], [0, 1]]))
    # mu = 3 violates the size condition
    assert not is_reduced(IntegerBasis.from_columns([[1, 0], [3, 1]]))


def test_lll_identity_fixed_point():
    ident = IntegerBasis.from_columns([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert lll_reduce(ident).cols == ident.cols


def test_lll_rejects_singular():
    with pytest.raises(ValueError):
        lll_reduce(IntegerBasis.from_columns([[2, 1], [4, 2]]))


def test_lll_two_dim_reaches_box_minimum():
    basis = IntegerBasis.from_columns([[201, 37], [1648, 296]])
    red = lll_reduce(basis)
    b1_norm = sum(x * x for x in red.cols[0])
    assert b1_norm == brute_min_sq(basis, 20)
    assert is_reduced(red)
    assert same_lattice(basis, red)


def test_lll_random_properties():
    rng = random.Random(2024)
    for trial in range(400):
        dim = 2 if trial % 2 else 3
        basis = random_basis(rng, dim)
        red = lll_reduce(basis)
        assert is_reduced(red)
        assert same_lattice(basis, red)
        assert abs(red.determinant()) == abs(basis.determinant())
        # determinism
        assert lll_reduce(basis).cols == red.cols


def test_lll_determinant_preserved_large_entries():
    rng = random.Random(5)
    for _ in range(60):
        basis = random_basis(rng, 3, span=10**6)
        red = lll_reduce(basis)
        assert abs(red.determinant()) == abs(basis.determinant())


def test_min_bound_identity_cases():
    ident = IntegerBasis.from_columns([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    mb = lattice_min_lower_bound(ident, [0, 0, 0])
    assert mb.lam == 1 and mb.c1 == 1 and mb.delta == 1 and mb.delta_sq == 1
    scaled = IntegerBasis.from_columns([[5, 0], [0, 5]])
    mb = lattice_min_lower_bound(scaled, [0, 0])
    assert mb.delta == 5 and mb.delta_sq == 25


def test_min_bound_half_integral_lambda():
    basis = IntegerBasis.from_columns([[2, 0], [0, 2]])
    mb = lattice_min_lower_bound(basis, [1, 1])
    assert mb.lam == Fraction(1, 2)
    assert not mb.target_in_lattice


def test_min_bound_below_brute_force():
    rng = random.Random(99)
    for _ in range(150):
        basis = random_basis(rng, 3, span=30)
        red = lll_reduce(basis)
        mb = lattice_min_lower_bound(red, [0, 0, 0])
        assert mb.delta_sq <= brute_min_sq(red, 6)
        assert mb.delta * mb.delta <= mb.delta_sq


def test_sqrt_bounds():
    rng = random.Random(3)
    for _ in range(200):
        x = Fraction(rng.randint(0, 10**12), rng.randint(1, 10**6))
        lo, hi = sqrt_lower(x), sqrt_upper(x)
        assert lo * lo <= x <= hi * hi
        assert hi - lo < Fraction(1, 10**30) * max(1, hi)


def _log10_problem(c_scale, x_bound):
    bits = digits_to_bits(80)
    root = alpha(2, 80)
    etas = (
        root.enclosure.rebits(bits).log(),
        -log_int(10, bits),
        (f_k_at(2, root.enclosure.rebits(bits)) * 9).log(),
    )
    return ReductionProblem(
        etas=etas,
        c=c_scale,
        x_bounds=(x_bound, x_bound, 1),
        c3=Fraction(33, 2),
        c4=log_int(10, BITS),
        c4_label="log10",
    )


def test_build_approx_lattice_shape():
    prob = _log10_problem(10**10, 100)
    basis, target = build_approx_lattice(prob)
    assert target == [0, 0, 0]
    assert basis.cols[0][:2] == (1, 0)
    assert basis.cols[1][:2] == (0, 1)
    assert basis.cols[2][:2] == (0, 0)
    # bottom row must be the stable floors of C * eta
    from kfibpal.realnum import floor_scaled

    for j, eta in enumerate(prob.etas):
        f, stable = floor_scaled(eta, prob.c)
        assert stable and basis.cols[j][2] == f


def test_build_approx_lattice_degenerate_scaling():
    prob = _log10_problem(1, 10)  # floor(1 * log(9 f)) = 1, fine
    bits = digits_to_bits(80)
    tiny = RealInterval.from_fraction(Fraction(3, 10), bits)
    bad = ReductionProblem(
        etas=(tiny, tiny, tiny),
        c=1,
        x_bounds=(10, 10, 10),
        c3=Fraction(1),
        c4=log_int(10, BITS),
    )
    with pytest.raises(ValueError):
        build_approx_lattice(bad)


def test_build_approx_lattice_floor_instability():
    bits = digits_to_bits(80)
    wide = RealInterval.from_fraction(Fraction(1, 2), bits) + RealInterval(
        RealInterval.from_int(0, bits).lo,
        RealInterval.from_fraction(Fraction(1, 100), bits).hi,
        bits,
    )
    prob = ReductionProblem(
        etas=(wide, wide, wide),
        c=10**6,
        x_bounds=(10, 10, 10),
        c3=Fraction(1),
        c4=log_int(10, BITS),
    )
    with pytest.raises(FloorInstabilityError):
        build_approx_lattice(prob)


def test_deweger_condition_failure_is_reported():
    out = deweger_bound(_log10_problem(10**10, 10**20))
    assert not out.condition_ok
    assert out.h_bound is None


def test_deweger_bound_small_instance():
    out = deweger_bound(_log10_problem(10**40, 10**6))
    assert out.condition_ok
    assert out.degenerate_excluded
    assert out.h_bound is not None
    # H <= (log(C c3) - log(gap))/log 10 with gap <= delta: crude sanity
    assert 0 < out.h_bound < 45
    # the rigorous budget implies the nearest-rounding variant
    assert out.condition_nearest_ok


def test_deweger_line_exclusion():
    # etas = (log 2, log 3, -log 2) plant the exact relation (1, 0, 1);
    # admissible ranges forbid it, so the second minimum takes over
    bits = digits_to_bits(80)
    etas = (log_int(2, bits), log_int(3, bits), -log_int(2, bits))
    x_bound = 10**6
    base = ReductionProblem(
        etas=etas,
        c=10**40,
        x_bounds=(1, x_bound, x_bound),
        c3=Fraction(3),
        c4=log_int(2, BITS),
    )
    out = deweger_bound(base)
    assert not out.condition_ok  # short planted vector blocks the plain test
    refined = ReductionProblem(
        etas=etas,
        c=10**40,
        x_bounds=(1, x_bound, x_bound),
        c3=Fraction(3),
        c4=log_int(2, BITS),
        coeff_ranges=((1, 1), (2, x_bound), (5, x_bound)),
    )
    out = deweger_bound(refined)
    assert out.condition_ok
    assert out.line_excluded is not None
    line = out.line_excluded
    assert line[0] != 0 and line[1] == 0  # the planted direction
    assert out.h_bound is not None


def test_deweger_line_exclusion_respects_admissible_line():
    # same planted relation, but now the ranges admit the line: must refuse
    bits = digits_to_bits(80)
    etas = (log_int(2, bits), log_int(3, bits), -log_int(2, bits))
    x_bound = 10**6
    prob = ReductionProblem(
        etas=etas,
        c=10**40,
        x_bounds=(1, x_bound, x_bound),
        c3=Fraction(3),
        c4=log_int(2, BITS),
        coeff_ranges=((1, 1), (0, x_bound), (1, x_bound)),
    )
    out = deweger_bound(prob)
    assert not out.condition_ok
