"""Exact lattice reduction and the scaled-logarithm bound machinery.

LLL runs in the all-integer formulation (basis vectors stay integral and
the Gram-Schmidt data is carried as integer numerators over the subdeterminant
denominators d_i), so reduction is deterministic and exact at any entry
size.  Everything downstream of it - the minimum lower bound and the
final gap-to-exponent bound - is decided on exact rationals; interval
arithmetic only enters for the final logarithm evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from gmpy2 import mpz

from .realnum import RealInterval, digits_to_bits, floor_scaled

__all__ = [
    "IntegerBasis",
    "GSOData",
    "MinBound",
    "ReductionProblem",
    "ReductionOutcome",
    "FloorInstabilityError",
    "gram_schmidt",
    "is_reduced",
    "lll_reduce",
    "lattice_min_lower_bound",
    "build_approx_lattice",
    "deweger_bound",
    "sqrt_lower",
    "sqrt_upper",
]


class FloorInstabilityError(ArithmeticError):
    """A scaled floor differed between interval endpoints; raise the precision."""


@dataclass(frozen=True)
class IntegerBasis:
    """Column basis of a full-rank integer lattice."""

    dim: int
    cols: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.cols) != self.dim or any(len(c) != self.dim for c in self.cols):
            raise ValueError("need a square column collection")

    @staticmethod
    def from_columns(cols: Sequence[Sequence[int]]) -> "IntegerBasis":
        cols = tuple(tuple(int(x) for x in col) for col in cols)
        return IntegerBasis(len(cols), cols)

    def column(self, j: int) -> tuple[int, ...]:
        return self.cols[j]

    def determinant(self) -> Fraction:
        mat = [[Fraction(self.cols[j][i]) for j in range(self.dim)] for i in range(self.dim)]
        det = Fraction(1)
        for col in range(self.dim):
            pivot = next((r for r in range(col, self.dim) if mat[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                mat[col], mat[pivot] = mat[pivot], mat[col]
                det = -det
            det *= mat[col][col]
            inv = 1 / mat[col][col]
            for r in range(col + 1, self.dim):
                factor = mat[r][col] * inv
                if factor:
                    mat[r] = [a - factor * b for a, b in zip(mat[r], mat[col])]
        return det


@dataclass(frozen=True)
class GSOData:
    """Exact Gram-Schmidt vectors and coefficients of a basis."""

    bstar: tuple[tuple[Fraction, ...], ...]
    mu: tuple[tuple[Fraction, ...], ...]

    def bstar_norms_sq(self) -> list[Fraction]:
        return [sum(x * x for x in v) for v in self.bstar]


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def gram_schmidt(basis: IntegerBasis) -> GSOData:
    """Exact rational Gram-Schmidt orthogonalization of the columns."""
    n = basis.dim
    bstar: list[list[Fraction]] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(x) for x in basis.cols[i]]
        for j in range(i):
            denom = _dot(bstar[j], bstar[j])
            if denom == 0:
                raise ValueError("singular basis")
            mu[i][j] = _dot([Fraction(x) for x in basis.cols[i]], bstar[j]) / denom
            v = [a - mu[i][j] * b for a, b in zip(v, bstar[j])]
        bstar.append(v)
    if any(all(x == 0 for x in v) for v in bstar):
        raise ValueError("singular basis")
    return GSOData(tuple(tuple(v) for v in bstar), tuple(tuple(r) for r in mu))


def is_reduced(basis: IntegerBasis) -> bool:
    """Size condition |mu_ij| <= 1/2 plus the 3/4 exchange condition, exactly."""
    gso = gram_schmidt(basis)
    norms = gso.bstar_norms_sq()
    n = basis.dim
    for i in range(n):
        for j in range(i):
            if abs(gso.mu[i][j]) > Fraction(1, 2):
                return False
    for i in range(1, n):
        # ||b*_i + mu b*_{i-1}||^2 = ||b*_i||^2 + mu^2 ||b*_{i-1}||^2
        lhs = norms[i] + gso.mu[i][i - 1] ** 2 * norms[i - 1]
        if lhs < Fraction(3, 4) * norms[i - 1]:
            return False
    return True


def lll_reduce(basis: IntegerBasis) -> IntegerBasis:
    """All-integer LLL with exchange constant 3/4.

    Maintains lam[i][j] = mu_ij * d[j] and the subdeterminants
    d[i] = det Gram(b_1..b_i) as integers; every update divides exactly.
    The output spans the same lattice (unimodular transform) and satisfies
    is_reduced; identical input yields an identical output.
    """
    n = basis.dim
    b = [[mpz(x) for x in col] for col in basis.cols]
    d = [mpz(1)] + [mpz(0)] * n
    lam = [[mpz(0)] * (n + 1) for _ in range(n + 1)]

    def gram_row(k: int) -> None:
        for j in range(1, k + 1):
            u = mpz(_dot(b[k - 1], b[j - 1]))
            for i in range(1, j):
                u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
            if j < k:
                lam[k][j] = u
            else:
                d[k] = u
        if d[k] == 0:
            raise ValueError("singular basis")

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) <= d[l]:
            return
        q = (2 * lam[k][l] + d[l]) // (2 * d[l])
        b[k - 1] = [x - q * y for x, y in zip(b[k - 1], b[l - 1])]
        lam[k][l] -= q * d[l]
        for i in range(1, l):
            lam[k][i] -= q * lam[l][i]

    def swap(k: int, kmax: int) -> None:
        b[k - 1], b[k - 2] = b[k - 2], b[k - 1]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lam_ = lam[k][k - 1]
        new_d = (d[k - 2] * d[k] + lam_ * lam_) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lam_ * t) // d[k - 1]
            lam[i][k - 1] = (new_d * t + lam_ * lam[i][k]) // d[k]
        d[k - 1] = new_d

    kmax = 1
    gram_row(1)
    k = 2
    while k <= n:
        if k > kmax:
            kmax = k
            gram_row(k)
        red(k, k - 1)
        if 4 * d[k] * d[k - 2] < 3 * d[k - 1] * d[k - 1] - 4 * lam[k][k - 1] * lam[k][k - 1]:
            swap(k, kmax)
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1
    return IntegerBasis.from_columns([[int(x) for x in col] for col in b])


def sqrt_lower(x: Fraction, digits: int = 40) -> Fraction:
    """Rational lower bound on sqrt(x) for x >= 0."""
    if x < 0:
        raise ValueError("negative operand")
    scale = 10**digits
    return Fraction(isqrt(x.numerator * scale * scale // x.denominator), scale)


def sqrt_upper(x: Fraction, digits: int = 40) -> Fraction:
    """Rational upper bound on sqrt(x) for x >= 0."""
    if x < 0:
        raise ValueError("negative operand")
    scale = 10**digits
    num = x.numerator * scale * scale
    q, r = divmod(num, x.denominator)
    root = isqrt(q)
    if root * root < q or r:
        root += 1
    return Fraction(root, scale)


@dataclass(frozen=True)
class MinBound:
    """Certified lower bound on the lattice minimum relative to a target point."""

    c1: Fraction  # upper bound on max_j ||b_1|| / ||b*_j||
    c1_sq: Fraction  # exact square of that maximum
    lam: Fraction  # exact distance factor from the target decomposition
    delta: Fraction  # certified lower bound on lam * ||b_1|| / c1
    delta_sq: Fraction  # exact square: lam^2 * min_j ||b*_j||^2
    target_in_lattice: bool
    # exact square of min over j >= 2 of ||b*_j||: a lower bound on the norm
    # of every lattice vector outside the line Z b_1 (any such vector has a
    # nonzero top Gram-Schmidt coefficient at some index >= 2)
    delta_excl_sq: Fraction = Fraction(0)


def _solve_fraction(basis: IntegerBasis, y: Sequence[int]) -> list[Fraction]:
    n = basis.dim
    mat = [[Fraction(basis.cols[j][i]) for j in range(n)] + [Fraction(y[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular basis")
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = 1 / mat[col][col]
        mat[col] = [a * inv for a in mat[col]]
        for r in range(n):
            if r != col and mat[r][col]:
                factor = mat[r][col]
                mat[r] = [a - factor * bq for a, bq in zip(mat[r], mat[col])]
    return [mat[i][n] for i in range(n)]


def _dist_to_nearest_int(x: Fraction) -> Fraction:
    frac = x - (x.numerator // x.denominator)
    return min(frac, 1 - frac)


def lattice_min_lower_bound(reduced: IntegerBasis, y: Sequence[int]) -> MinBound:
    """Lower bound on min ||x - y|| over lattice points x (x != 0 when y = 0).

    With z = B^-1 y: lam is 1 when y lies in the lattice and the distance
    of z's last nonzero coordinate to the nearest integer otherwise; the
    bound is lam * ||b_1|| / c1 = lam * min_j ||b*_j||, kept exact in its
    squared form and reported with a certified rational square root.
    """
    gso = gram_schmidt(reduced)
    norms = gso.bstar_norms_sq()
    b1_sq = norms[0]
    c1_sq = max(b1_sq / ns for ns in norms)
    if all(v == 0 for v in y):
        lam = Fraction(1)
        in_lattice = True
    else:
        z = _solve_fraction(reduced, y)
        if all(zi.denominator == 1 for zi in z):
            lam = Fraction(1)
            in_lattice = True
        else:
            in_lattice = False
            i0 = max(i for i, zi in enumerate(z) if zi != 0)
            lam = _dist_to_nearest_int(z[i0])
    delta_sq = lam * lam * min(norms)
    delta_excl_sq = lam * lam * min(norms[1:]) if len(norms) > 1 else delta_sq
    return MinBound(
        c1=sqrt_upper(c1_sq),
        c1_sq=c1_sq,
        lam=lam,
        delta=sqrt_lower(delta_sq),
        delta_sq=delta_sq,
        target_in_lattice=in_lattice,
        delta_excl_sq=delta_excl_sq,
    )


@dataclass(frozen=True)
class ReductionProblem:
    """One scaled-logarithm reduction instance.

    The linear form is eta0 + x_1 eta_1 + ... + x_k eta_k with |x_i| <= X_i
    and |form| <= c3 * exp(-c4 * H); the goal is an explicit bound on H.
    c4 is carried as a certified enclosure plus a printable label.
    """

    etas: tuple[RealInterval, ...]
    c: int
    x_bounds: tuple[int, ...]
    c3: Fraction
    c4: RealInterval
    c4_label: str = ""
    eta0: Optional[RealInterval] = None
    # inclusive per-coefficient ranges that actual solutions must satisfy,
    # used only to rule out a spurious shortest-vector line (see
    # deweger_bound); None disables the refinement
    coeff_ranges: Optional[tuple[tuple[int, int], ...]] = None

    def __post_init__(self):
        if len(self.etas) != len(self.x_bounds):
            raise ValueError("one coefficient bound per eta")
        if self.c <= 0 or self.c3 <= 0 or not self.c4.lo > 0:
            raise ValueError("scaling and bound constants must be positive")
        if any(x < 0 for x in self.x_bounds):
            raise ValueError("coefficient bounds must be non-negative")
        if self.coeff_ranges is not None and len(self.coeff_ranges) != len(self.etas):
            raise ValueError("one coefficient range per eta")

    @property
    def dim(self) -> int:
        return len(self.etas)

    @property
    def x0(self) -> int:
        return max(self.x_bounds)


@dataclass(frozen=True)
class ReductionOutcome:
    """Result of one reduction: the exact test data and the bound, if any.

    condition_ok uses the floor-rounding error budget sum(X_i) + 1 = 2T;
    with entries rounded by floor the per-term error is < 1, not <= 1/2,
    so the nearest-rounding test against T alone would be too optimistic.
    Both tests are recorded.
    """

    min_bound: MinBound
    s_value: int
    t_value: Fraction
    condition_ok: bool
    condition_nearest_ok: bool
    h_bound: Optional[int]
    h_upper: Optional[Fraction]
    degenerate_excluded: bool
    floors: tuple[int, ...]
    # set when the bound came from excluding the line Z b_1 whose
    # coefficient vector provably violates the admissible ranges
    line_excluded: Optional[tuple[int, ...]] = None
    # certified lower bound on sqrt(delta^2 - S) - 2T when the test passed
    gap: Optional[Fraction] = None


def build_approx_lattice(problem: ReductionProblem) -> tuple[IntegerBasis, list[int]]:
    """Integer approximation lattice and target for a reduction problem.

    Identity rows on top, floors of C * eta_i across the bottom; the target
    is -floor(C * eta_0) in the last coordinate (zero when eta_0 is zero).
    Raises FloorInstabilityError when any floor is not stable at the etas'
    working precision, and ValueError when the lattice would be singular.
    """
    k = problem.dim
    floors = []
    for eta in problem.etas:
        f, stable = floor_scaled(eta, problem.c)
        if not stable:
            raise FloorInstabilityError("unstable floor; recompute etas at higher precision")
        floors.append(f)
    if floors[-1] == 0:
        raise ValueError("degenerate scaling: floor(C * eta_k) = 0 gives a singular lattice")
    cols = []
    for j in range(k - 1):
        col = [0] * k
        col[j] = 1
        col[k - 1] = floors[j]
        cols.append(col)
    cols.append([0] * (k - 1) + [floors[-1]])
    if problem.eta0 is None:
        y0 = 0
    else:
        y0, stable = floor_scaled(problem.eta0, problem.c)
        if not stable:
            raise FloorInstabilityError("unstable floor for eta_0")
    target = [0] * (k - 1) + [-y0]
    return IntegerBasis.from_columns(cols), target


_H_BITS = digits_to_bits(60)


def _line_coefficients(basis: IntegerBasis, b1: Sequence[int]) -> tuple[int, ...]:
    """Coefficient vector x with basis * x = b1; integral for lattice members."""
    z = _solve_fraction(basis, b1)
    if any(zi.denominator != 1 for zi in z):
        raise ArithmeticError("reduced vector not in the input lattice")
    return tuple(int(zi) for zi in z)


def _line_admissible_multiplier(
    line: Sequence[int], ranges: Sequence[tuple[int, int]]
) -> Optional[int]:
    """Smallest |j| != 0 with j*line inside every range, or None."""
    lo_j, hi_j = None, None
    for x, (lo, hi) in zip(line, ranges):
        if x == 0:
            if lo > 0 or hi < 0:
                return None
            continue
        a, b = Fraction(lo, x), Fraction(hi, x)
        if a > b:
            a, b = b, a
        a_int = -((-a.numerator) // a.denominator)  # ceil
        b_int = b.numerator // b.denominator  # floor
        lo_j = a_int if lo_j is None else max(lo_j, a_int)
        hi_j = b_int if hi_j is None else min(hi_j, b_int)
        if lo_j > hi_j:
            return None
    if lo_j is None:
        return None
    candidates = [j for j in range(lo_j, hi_j + 1) if j != 0]
    return min(candidates, key=abs) if candidates else None


def deweger_bound(problem: ReductionProblem) -> ReductionOutcome:
    """Reduce one instance: build, LLL, test, and bound the exponent H.

    When delta^2 >= S + (2T)^2 the solutions obey
        H <= (log(C * c3) - log(sqrt(delta^2 - S) - 2T)) / c4,
    evaluated with outward rounding and floored; otherwise the instance is
    reported as condition-failed so the caller can enlarge C.  The branch
    with x_1 = ... = x_{k-1} = 0 forces x_k = -floor(C eta_0)/floor(C eta_k),
    which is the zero form for a homogeneous target and is excluded by the
    caller's nonvanishing certificate.

    Degenerate instances: when the form has a near-zero at coefficients no
    actual solution can take (say at n = 2), the lattice picks it up as an
    exceptionally short b_1 and the plain condition fails at every usable C.
    If coefficient ranges are supplied and no integer multiple of b_1's
    coefficient vector lies inside them, every solution maps outside the
    line Z b_1, where min_{j>=2} ||b*_j|| is a valid lower bound; the test
    and the bound then run with that second minimum instead.
    """
    basis, target = build_approx_lattice(problem)
    reduced = lll_reduce(basis)
    mb = lattice_min_lower_bound(reduced, target)
    xs = problem.x_bounds
    s_value = sum(x * x for x in xs[:-1])
    t_value = Fraction(1 + sum(xs), 2)
    err = 1 + sum(xs)  # floor error budget, equals 2T
    cond_nearest = mb.delta_sq >= t_value * t_value + s_value
    needed = Fraction(err * err + s_value)
    cond = mb.delta_sq >= needed
    floors = tuple(floor_scaled(eta, problem.c)[0] for eta in problem.etas)
    degenerate_excluded = problem.eta0 is None
    delta_used_sq = mb.delta_sq
    line_excluded = None
    if (
        not cond
        and problem.coeff_ranges is not None
        and problem.eta0 is None
        and mb.delta_excl_sq >= needed
    ):
        line = _line_coefficients(basis, reduced.cols[0])
        if _line_admissible_multiplier(line, problem.coeff_ranges) is None:
            cond = True
            delta_used_sq = mb.delta_excl_sq
            line_excluded = line
    if not cond:
        return ReductionOutcome(
            mb, s_value, t_value, False, cond_nearest, None, None, degenerate_excluded, floors
        )
    # gap = sqrt(delta^2 - S) - 2T > 0 exactly; use a rational lower bound
    # on the root that is sharp enough to stay positive.
    digits = 40
    while True:
        root_lo = sqrt_lower(delta_used_sq - s_value, digits)
        gap = root_lo - err
        if gap > 0:
            break
        digits *= 2
        if digits > 20000:
            raise ArithmeticError("cannot certify a positive gap")
    log_gap = RealInterval.from_fraction(gap, _H_BITS).log()
    log_cc3 = RealInterval.from_fraction(Fraction(problem.c) * problem.c3, _H_BITS).log()
    h_iv = (log_cc3 - log_gap) / problem.c4.rebits(_H_BITS)
    h_upper = h_iv.hi_fraction()
    h_bound = h_upper.numerator // h_upper.denominator
    return ReductionOutcome(
        mb,
        s_value,
        t_value,
        True,
        cond_nearest,
        h_bound,
        h_upper,
        degenerate_excluded,
        floors,
        line_excluded,
        gap,
    )
