"""Command-line front end: ``pit <command> [options]``.

Exit codes: 0 for a zero verdict (or success), 1 for a nonzero verdict (or a
failed check), 2 for any error.  Every line that is not part of a serialized
artifact starts with ``#`` so outputs can be fed back into the parsers.
"""

from __future__ import annotations

import argparse
import sys

from . import algebra as alg
from .circuits import DEFAULT_CAP, DepthThreeCircuit, FormulaCircuit
from .field import DEFAULT_PRIME, ExpansionTooLarge
from .pit import DEFAULT_MAX_DIM, AlgebraTermCircuit, BudgetExceeded, DimensionTooLarge, check, robustness_search
from .suites import SuiteConfig, report, run_suite
from .textio import (
    ParseError,
    format_linear,
    parse_algebra,
    parse_circuit_file,
    parse_poly,
    serialize,
    serialize_algebra,
)
from .transforms import (
    ben_or_cleve,
    homogenize_and_abp,
    is_transvection,
    local_ring_reduction,
    mask_offdiagonal,
    sps_to_u2,
)

EXIT_ZERO, EXIT_NONZERO, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _is_algebra_text(text: str) -> bool:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line and not line.startswith("field"):
            return line.startswith("algebra")
    return False


def load_source(path: str, p: int):
    """A circuit IR or an AlgebraTermCircuit, depending on the file contents."""
    text = _read(path)
    if _is_algebra_text(text):
        af = parse_algebra(text, p)
        if af.terms is None:
            raise UsageError("algebra file has no 'term' lines to test")
        alg.validate_basis(af.basis)
        return AlgebraTermCircuit(af.basis, af.terms)
    circuit, _ = parse_circuit_file(text, p)
    return circuit


def _require(circuit, kind, name: str):
    if not isinstance(circuit, kind):
        raise UsageError(f"expected a {name} circuit, got {type(circuit).__name__}")
    return circuit


def _emit(args, artifact: str, stats: str):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(artifact)
    else:
        sys.stdout.write(artifact)
    print(f"# stats {stats}")


def cmd_check(args) -> int:
    source = load_source(args.input, args.field)
    verdict = check(source, args.mode, cap=args.cap, trials=args.trials, seed=args.seed, max_dim=args.max_dim)
    if args.format == "records":
        print(verdict.record())
    else:
        line = f"{verdict.label} (mode {verdict.mode}, seed {args.seed})"
        if verdict.witness:
            line += " witness " + " ".join(f"{k}={v}" for k, v in verdict.witness.items())
        print(line)
        for t in verdict.trace:
            print(f"# {t}")
    return EXIT_ZERO if verdict.zero else EXIT_NONZERO


def cmd_lower(args) -> int:
    c = _require(load_source(args.input, args.field), DepthThreeCircuit, "sps")
    lo = sps_to_u2(c)
    masked = mask_offdiagonal(lo)
    n, d, s = lo.source_stats
    ok = lo.within_bound()
    stats = f"len={len(lo.seq)} bound={lo.size_bound()} n={n} d={d} s={s} l_factors={len(lo.l_factors)} bound_ok={ok}"
    _emit(args, serialize(masked, lo.l_factors), stats)
    return EXIT_ZERO if ok else EXIT_NONZERO


def cmd_abp(args) -> int:
    c = _require(load_source(args.input, args.field), DepthThreeCircuit, "sps")
    lo = sps_to_u2(c)
    a = homogenize_and_abp(lo)
    ok = a.is_planar() and a.core_width() <= 2
    stats = f"levels={len(a.levels)} width={a.width} degree={a.degree} planar={a.is_planar()}"
    _emit(args, serialize(a, lo.l_factors), stats)
    return EXIT_ZERO if ok else EXIT_NONZERO


def cmd_boc(args) -> int:
    c = _require(load_source(args.input, args.field), FormulaCircuit, "formula")
    seq = ben_or_cleve(c)
    depth = c.depth()
    bound = 4**depth
    ok = len(seq) <= bound and all(is_transvection(m) for m in seq.matrices)
    _emit(args, serialize(seq), f"len={len(seq)} bound={bound} depth={depth} bound_ok={ok}")
    return EXIT_ZERO if ok else EXIT_NONZERO


def cmd_reduce_local(args) -> int:
    c = _require(load_source(args.input, args.field), DepthThreeCircuit, "sps")
    basis, terms, labels = local_ring_reduction(c)
    s, d = c.s, max(c.d, 1)
    expected = s * (d - 1) + 2
    ok = basis.k == expected
    label_text = ",".join(f"y{i}^{a}" if i else "1" for i, a in labels)
    artifact = serialize_algebra(basis, terms.terms)
    _emit(args, artifact, f"dim={basis.k} expected={expected} s={s} d={d} basis={label_text}")
    return EXIT_ZERO if ok else EXIT_NONZERO


def cmd_validate_algebra(args) -> int:
    af = parse_algebra(_read(args.input), args.field)
    b = af.basis
    try:
        alg.validate_basis(b)
    except alg.NotAssociative as exc:
        i, j, m = exc.triple
        print(f"invalid: not associative at triple ({i + 1}, {j + 1}, {m + 1}): {exc}")
        return EXIT_NONZERO
    except alg.BadIdentity as exc:
        print(f"invalid: {exc}")
        return EXIT_NONZERO
    print(f"ok k={b.k} p={b.p} identity=ok commutative={str(b.commutative).lower()}")
    return EXIT_ZERO


def cmd_robustness(args) -> int:
    p = args.field if args.field is not None else 2
    f = parse_poly(args.poly, p)
    hits = robustness_search(f, p, args.budget)
    print(f"# p={p} f={f} violations={len(hits)}")
    for l1, l2 in hits:
        print(f"({format_linear(l1)}) ({format_linear(l2)})")
    return EXIT_ZERO


def cmd_suite(args) -> int:
    cfg = SuiteConfig(seed=args.seed, mutate=args.mutate)
    if args.quick:
        cfg.random_sps, cfg.zero_sps, cfg.zoo_instances, cfg.formulas = 60, 12, 40, 40
        cfg.count_rule_instances = cfg.local_ring_instances = 4
    results = run_suite(cfg)
    sys.stdout.write(f"# seed {args.seed}\n" + report(results))
    return EXIT_ZERO if all(r.passed for r in results) else EXIT_NONZERO


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pit", description="Identity testing for small arithmetic circuits.")
    ap.add_argument(
        "--field", type=int, default=None, help=f"prime modulus when a file has no 'field' line (default {DEFAULT_PRIME}; 2 for robustness)"
    )
    ap.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max monomials during symbolic expansion")
    ap.add_argument("--seed", type=int, default=0, help="64-bit seed for all randomness")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--format", choices=("text", "records"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether a circuit is identically zero")
    p.add_argument("input")
    p.add_argument("--mode", choices=("auto", "brute", "rand", "commutative"), default="auto")
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    p.set_defaults(func=cmd_check)

    for name, func, help_text in (
        ("lower", cmd_lower, "depth-3 circuit to a masked 2x2 upper-triangular sequence"),
        ("abp", cmd_abp, "depth-3 circuit to a width-2 planar ABP"),
        ("boc", cmd_boc, "formula to a product of 3x3 transvections"),
        ("reduce-local", cmd_reduce_local, "depth-3 circuit to a depth-2 circuit over a local ring"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input")
        p.add_argument("-o", "--output")
        p.set_defaults(func=func)

    p = sub.add_parser("validate-algebra", help="check associativity and identity of an algebra file")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate_algebra)

    p = sub.add_parser("robustness", help="search pairs of linear functions violating robustness")
    p.add_argument("poly", help="polynomial text, e.g. 'x1*x2 + x3*x4'")
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("suite", help="run the cross-oracle property suites")
    p.add_argument("--quick", action="store_true", help="smaller instance counts")
    p.add_argument("--mutate", action="store_true", help="corrupt one structure constant to exercise failure reporting")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed < 0 or args.seed >= 2**64:
        print("error: seed must be in [0, 2^64)", file=sys.stderr)
        return EXIT_ERROR
    if args.field is None and args.command != "robustness":
        args.field = DEFAULT_PRIME
    try:
        return args.func(args)
    except (
        ParseError,
        UsageError,
        alg.ValidationError,
        ExpansionTooLarge,
        DimensionTooLarge,
        BudgetExceeded,
        OSError,
        ValueError,
        TypeError,
    ) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
