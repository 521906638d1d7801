"""k-step Fibonacci numbers that are palindromic concatenations of two
distinct repdigits.

The package decides, with a machine-checkable certificate, which terms of
the order-k Fibonacci recurrences have decimal expansions of the shape
d1...d1 d2...d2 d1...d1 with d1 != d2.  It combines exact big-integer
sequence arithmetic (`kfib`), directed-rounding interval arithmetic over
MPFR (`realnum`), all-integer lattice reduction with a certified minimum
bound (`lattice`), explicit lower bounds for linear forms in logarithms
and the cap lemmas built on them (`baker`), and the orchestrating proof
pipeline plus certificate (`pipeline`).
"""

from .baker import (
    HeightValue,
    MatveevInstance,
    height_bounds_for_gammas,
    height_rational,
    outer_block_cap,
    middle_block_caps,
    large_order_caps,
    matveev_bound,
    n_window,
)
from .kfib import (
    PalindromeDecomposition,
    decompose_palindrome,
    fib_k,
    fib_stream,
    palindrome_value,
    pow2_palindrome_scan,
    search_solutions,
    verify_divisibility_elimination,
)
from .lattice import (
    IntegerBasis,
    ReductionOutcome,
    ReductionProblem,
    build_approx_lattice,
    deweger_bound,
    gram_schmidt,
    is_reduced,
    lattice_min_lower_bound,
    lll_reduce,
)
from .pipeline import (
    LinearFormSpec,
    ProofCertificate,
    ProofConfig,
    emit_certificate,
    linear_form_etas,
    nonvanishing_check,
    run_case1,
    run_case2,
    run_case_small_n,
    run_full_proof,
)
from .realnum import (
    CharPoly,
    DominantRoot,
    RealInterval,
    alpha,
    binet_residual,
    f_k_at,
    floor_scaled,
    log_enclosure,
    pow2_residual_check,
)

__version__ = "0.1.0"
