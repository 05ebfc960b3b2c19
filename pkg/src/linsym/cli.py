"""Command-line front end: ``linsym dim | algebra | verify | scan``.

Exit codes: 0 ok, 1 unreadable input, 2 non-commuting A and B,
3 exact mode impossible, 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .algebra import (FREE, SCAN_RANGE, build_algebra, build_free_algebra,
                      dimension_only, partition_from_divisors, realizable_dimensions,
                      structure_dimension)
from .commutant import rational_standin
from .formats import ParseError, algebra_to_dict, load_algebra, load_system, save_algebra
from .structure import NonCommutingError, smith_invariant_factors
from .verify import DEFAULT_SAMPLES, DEFAULT_TOL, verify_algebra

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_NONCOMMUTING = 2
EXIT_EXACTNESS = 3
EXIT_VERIFY = 4

LOG_ENV = "LINSYM_LOG_LEVEL"

log = logging.getLogger("linsym")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _label(classification: str) -> str:
    return "free system" if classification == FREE else classification.replace("_", "-")


def _load(args):
    spec = load_system(args.input)
    if getattr(args, "field", None):
        spec.field = args.field
    return spec


def _is_rational_matrix(m) -> bool:
    return all(isinstance(v, Fraction) for v in m.entries)


def _summary(spec) -> dict:
    """Dimension data without building generators."""
    if spec.jordan is not None:
        dim, cls, N = structure_dimension(spec.jordan)
        partition = partition_from_divisors(spec.jordan.elementary_divisors())
    else:
        D = spec.reduced_matrix()
        dim, cls, N = dimension_only(D)
        partition = smith_invariant_factors(D).degrees
    return {"n": spec.n, "field": spec.field, "partition": list(partition), "N": N,
            "classification": cls, "dimension": dim}


def cmd_dim(args) -> int:
    info = _summary(_load(args))
    print(f"n = {info['n']}")
    print(f"partition = ({', '.join(map(str, info['partition']))})")
    if info["classification"] == FREE:
        print(f"dim = {info['dimension']}, free system")
    else:
        print(f"dim = {info['dimension']}, N = {info['N']}, {_label(info['classification'])}")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(info, fh, indent=1)
    return EXIT_OK


def _short(text: str, width: int = 70) -> str:
    return text if len(text) <= width else text[:width - 3] + "..."


def cmd_algebra(args) -> int:
    spec = _load(args)
    info = _summary(spec)
    if info["classification"] == FREE:
        alg = build_free_algebra(spec.n)
    else:
        structure = spec.structure()
        if args.mode == "exact" and not structure.exact:
            raise CliError("eigenvalues are not rational, so exact generators are unavailable; "
                           "rerun with --mode numeric", EXIT_EXACTNESS)
        alg = build_algebra(structure, spec.field)
        if structure.rotations and args.mode == "exact" and not alg.is_exact():
            log.warning("rotation-block solutions need irrational roots; those fields are numeric")
    if args.mode == "numeric":
        alg = alg.to_numeric()
    if args.output:
        save_algebra(alg, args.output)
    else:
        json.dump(algebra_to_dict(alg), sys.stdout, indent=1, ensure_ascii=False)
        print()
    out = sys.stderr if not args.output else sys.stdout
    print(f"dim = {alg.dimension}, N = {alg.N}, {_label(alg.classification)}", file=out)
    if alg.structure is not None:
        print(f"J = {alg.structure.describe()}", file=out)
    for i, g in enumerate(alg.generators):
        text = g.describe() if hasattr(g, "describe") else repr(g)
        print(f"{i:3d}  {g.family:<16} {_short(text)}", file=out)
    return EXIT_OK


def _numerically_equal(a, b, tol: float = 1e-9) -> bool:
    return a.shape == b.shape and all(abs(complex(x) - complex(y)) <= tol for x, y in zip(a.entries, b.entries))


def cmd_verify(args) -> int:
    spec = _load(args)
    alg = load_algebra(args.algebra)
    info = _summary(spec)
    expected = (info["n"], info["dimension"], info["classification"], info["N"])
    found = (alg.n, alg.dimension, alg.classification, alg.N)
    if expected != found:
        print(f"mismatch: system gives (n, dim, class, N) = {expected}, algebra file has {found}")
        return EXIT_VERIFY
    cross_D = None
    if info["classification"] != FREE:
        structure = spec.structure()
        if not _numerically_equal(structure.matrix(), alg.J):
            print("mismatch: the algebra refers to a different Jordan matrix")
            return EXIT_VERIFY
        D = spec.reduced_matrix()
        cross_D = D if _is_rational_matrix(D) else rational_standin(structure)
    report = verify_algebra(alg, samples=args.samples, seed=args.seed, tol=args.tol,
                            closure=not args.no_closure, D=cross_D)
    failed = set(report.failed_generators())
    print(f"samples = {report.samples}, seed = {report.seed}, tol = {report.tol:g}")
    for i, (g, r, z) in enumerate(zip(alg.generators, report.max_residuals, report.exact_zero)):
        how = "exact 0" if z else f"{r:.3e}"
        status = "FAIL" if i in failed else "ok"
        print(f"{i:3d}  {g.family:<16} {how:>12}  {status}")
    if report.closure is not None:
        print(f"closure: {'pass' if report.closure else 'FAIL'}")
    if report.cross_check is not None:
        k, deg, div = report.cross_check
        print(f"N cross-check: kernel = {k}, degrees = {deg}, divisors = {'absent' if div is None else div}")
    passed = alg.dimension - len(failed)
    if report.passed:
        print(f"PASS {passed}/{alg.dimension}")
        return EXIT_OK
    if failed:
        print(f"FAIL: generators {sorted(failed)} are not symmetries")
    else:
        print("FAIL")
    return EXIT_VERIFY


def cmd_scan(args) -> int:
    n = args.n
    lo, hi = SCAN_RANGE
    if not lo <= n <= hi:
        raise CliError(f"--n must lie in [{lo}, {hi}]", EXIT_PARSE)
    dims = realizable_dimensions(n)
    a, b = 3 * n + 1, n * n + 4
    missing = [d for d in range(a, b + 1) if d not in dims]
    print(f"n = {n}")
    print(f"attainable: {', '.join(map(str, sorted(dims)))}")
    print(f"interval: [{a}, {b}]")
    if missing:
        print(f"missing: {', '.join(map(str, missing))}")
    else:
        print(f"all of [{a}, {b}] attained")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors count as unreadable input, keeping exit code 2 for non-commuting matrices
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linsym", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dim", help="dimension of the symmetry algebra")
    d.add_argument("--input", required=True)
    d.add_argument("--output", help="also write the report as JSON")
    d.add_argument("--field", choices=["real", "complex"])
    d.set_defaults(func=cmd_dim)

    a = sub.add_parser("algebra", help="emit a basis of the symmetry algebra")
    a.add_argument("--input", required=True)
    a.add_argument("--output")
    a.add_argument("--field", choices=["real", "complex"])
    a.add_argument("--mode", choices=["exact", "numeric"], default="exact")
    a.set_defaults(func=cmd_algebra)

    v = sub.add_parser("verify", help="check an algebra file against a system")
    v.add_argument("--input", required=True, help="system file")
    v.add_argument("--algebra", required=True, help="algebra file")
    v.add_argument("--field", choices=["real", "complex"])
    v.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.add_argument("--no-closure", action="store_true", help="skip the bracket closure test")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="attainable dimensions for n×n systems")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_scan)
    return p


def main(argv=None) -> int:
    level = os.environ.get(LOG_ENV, "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        level = "WARNING"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    try:
        return args.func(args)
    except NonCommutingError as exc:
        print(f"error: A and B do not commute ({exc})", file=sys.stderr)
        return EXIT_NONCOMMUTING
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
