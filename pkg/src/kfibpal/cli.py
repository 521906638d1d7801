"""Command-line interface.

Subcommands: prove, search, pow2-scan, reduce, matveev, alpha, caps.
`prove` exits 0 only when the certificate verdict is "proved"; the other
subcommands exit 0 on normal completion.  Worker count for partitionable
sweeps comes from the KFIBPAL_WORKERS environment variable; every
mathematical setting is a flag.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import baker, kfib, pipeline
from .lattice import ReductionProblem, deweger_bound
from .realnum import RealInterval, alpha, digits_to_bits, log_int


def _cmd_search(args) -> int:
    hits = kfib.search_solutions(args.kmin, args.kmax, args.nmin, args.nmax)
    for k, n, value, dec in hits:
        print(f"{k},{n},{value},{dec.d1},{dec.d2},{dec.ell},{dec.m}")
    summary = {
        "schema": pipeline.SCHEMA_VERSION,
        "command": "search",
        "k_range": [args.kmin, args.kmax],
        "n_range": [args.nmin, args.nmax],
        "hits": [
            {"k": k, "n": n, "value": str(v), "decomposition": [d.d1, d.d2, d.ell, d.m]}
            for k, n, v, d in hits
        ],
    }
    print(json.dumps(summary))
    return 0


def _cmd_pow2_scan(args) -> int:
    hits = kfib.pow2_palindrome_scan(args.max_ell, args.max_m)
    for value, dec in hits:
        print(f"-,-,{value},{dec.d1},{dec.d2},{dec.ell},{dec.m}")
    summary = {
        "schema": pipeline.SCHEMA_VERSION,
        "command": "pow2-scan",
        "max_ell": args.max_ell,
        "max_m": args.max_m,
        "candidates": 9 * 9 * args.max_ell * args.max_m,
        "hits": [
            {"value": str(v), "decomposition": [d.d1, d.d2, d.ell, d.m]} for v, d in hits
        ],
    }
    print(json.dumps(summary))
    return 0


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _eta_from_spec(entry: dict, prec: int) -> RealInterval:
    bits = digits_to_bits(prec)
    kind = entry["kind"]
    if kind == "log-alpha":
        iv = alpha(int(entry["k"]), prec).enclosure.rebits(bits).log()
    elif kind == "log-10":
        iv = log_int(10, bits)
    elif kind == "log-rational":
        p, q = int(entry["p"]), int(entry["q"])
        if p == q:
            iv = RealInterval.zero(bits)
        else:
            iv = log_int(p, bits) - log_int(q, bits)
    elif kind == "log-expr-9f-over-d":
        from .realnum import f_k_at

        k = int(entry["k"])
        den = int(entry["d"])
        root = alpha(k, prec).enclosure.rebits(bits)
        iv = (f_k_at(k, root) * 9).log() - log_int(den, bits)
    else:
        raise ValueError(f"unknown eta kind {kind!r}")
    if entry.get("negate"):
        iv = -iv
    return iv


def _cmd_reduce(args) -> int:
    with open(args.problem) as fh:
        desc = json.load(fh)
    prec = int(desc.get("prec", 240))
    etas = tuple(_eta_from_spec(e, prec) for e in desc["etas"])
    c4_label = desc.get("c4", "log10")
    if c4_label == "log10":
        c4 = pipeline.C4_LOG10
    elif c4_label == "log2":
        c4 = pipeline.C4_LOG2
    else:
        c4 = RealInterval.from_fraction(_parse_fraction(c4_label), digits_to_bits(60))
    ranges = desc.get("coeff_ranges")
    problem = ReductionProblem(
        etas=etas,
        c=int(str(desc["C"])),
        x_bounds=tuple(int(str(x)) for x in desc["X"]),
        c3=_parse_fraction(str(desc["c3"])),
        c4=c4,
        c4_label=c4_label,
        coeff_ranges=tuple((int(a), int(b)) for a, b in ranges) if ranges else None,
    )
    out = deweger_bound(problem)
    result = {
        "condition_ok": out.condition_ok,
        "condition_nearest_ok": out.condition_nearest_ok,
        "h_bound": out.h_bound,
        "s": str(out.s_value),
        "t": str(out.t_value),
        "delta_sq": str(out.min_bound.delta_sq),
        "c1": str(out.min_bound.c1),
        "lambda": str(out.min_bound.lam),
        "floors": [str(f) for f in out.floors],
        "line_excluded": list(out.line_excluded) if out.line_excluded else None,
    }
    print(json.dumps(result, indent=2))
    return 0


def _cmd_matveev(args) -> int:
    a_values = tuple(_parse_fraction(a) for a in args.A.split(","))
    inst = baker.MatveevInstance(
        t=args.t, d_degree=args.D, b_coeff=_parse_fraction(args.B), a_values=a_values
    )
    bound = baker.matveev_bound(inst)
    print(json.dumps({"log_gamma_lower_bound": float(bound), "exact": str(bound)}))
    return 0


def _cmd_alpha(args) -> int:
    root = alpha(args.k, args.prec)
    lo, hi = root.enclosure.lo_fraction(), root.enclosure.hi_fraction()
    scale = 10 ** (args.prec + 2)
    print(
        json.dumps(
            {
                "k": args.k,
                "prec": args.prec,
                "lo": f"{lo.numerator * scale // lo.denominator}e-{args.prec + 2}",
                "hi": f"{-((-hi.numerator * scale) // hi.denominator)}e-{args.prec + 2}",
                "sign_change_certified": root.sign_change_ok(),
            }
        )
    )
    return 0


def _cmd_caps(args) -> int:
    m_cap, n_cap = baker.middle_block_caps(args.k)
    n_int = n_cap.numerator // n_cap.denominator + 1
    ell_cap = baker.outer_block_cap(args.k, n_cap)
    caps_large = baker.large_order_caps()
    print(
        json.dumps(
            {
                "k": args.k,
                "ell_cap": str(ell_cap.numerator // ell_cap.denominator + 1),
                "n_cap": str(n_int),
                "m_cap_at_n_cap": str(
                    m_cap(baker._iv(n_cap).log().hi_fraction()).numerator
                    // m_cap(baker._iv(n_cap).log().hi_fraction()).denominator
                    + 1
                ),
                "large_k_caps": {"k": str(caps_large.k_cap), "n": str(caps_large.n_cap)},
            },
            indent=2,
        )
    )
    return 0


def _cmd_prove(args) -> int:
    stride = 1 if args.full else args.stride
    config = pipeline.ProofConfig(
        stride=stride,
        prec_case1=args.prec,
        prec_case2=max(pipeline.PREC_CASE2, args.prec),
    )
    cert = pipeline.run_full_proof(config)
    if args.out:
        pipeline.emit_certificate(cert, args.out)
        print(f"certificate written to {args.out}")
    else:
        print(json.dumps(cert.to_dict(), indent=2))
    print(f"verdict: {cert.verdict}")
    return 0 if cert.verdict == "proved" else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kfibpal",
        description=(
            "decide which k-step Fibonacci numbers are palindromic "
            "concatenations of two distinct repdigits, with a verifiable "
            "certificate"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="enumerate solutions in a (k, n) box")
    p.add_argument("--kmin", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--nmin", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("pow2-scan", help="scan bounded palindromes for powers of two")
    p.add_argument("--max-ell", type=int, required=True)
    p.add_argument("--max-m", type=int, required=True)
    p.set_defaults(func=_cmd_pow2_scan)

    p = sub.add_parser("reduce", help="run one reduction instance from a JSON file")
    p.add_argument("problem", help="path to the problem description")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("matveev", help="certified lower bound for a form in t logs")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--B", type=str, required=True)
    p.add_argument("--A", type=str, required=True, help="comma-separated A values")
    p.set_defaults(func=_cmd_matveev)

    p = sub.add_parser("alpha", help="certified enclosure of the dominant root")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--prec", type=int, default=60)
    p.set_defaults(func=_cmd_alpha)

    p = sub.add_parser("caps", help="pre-reduction caps for a given order")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_caps)

    p = sub.add_parser("prove", help="run the full pipeline and emit a certificate")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--full", action="store_true", help="sweep every instance")
    group.add_argument("--stride", type=int, default=10, help="sample every Nth k and l")
    p.add_argument("--prec", type=int, default=pipeline.PREC_CASE1)
    p.add_argument("--out", type=str, default=None, help="certificate path")
    p.set_defaults(func=_cmd_prove)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
