"""Command line entry point: ``mcbc construct|verify|serve|bounds|table``.

Exit codes: 0 success or valid, 1 invalid code or unservable request,
2 bad flags or malformed input, 3 construction precondition failed,
4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import constructions as cons
from .bounds import (
    bounds_report,
    construction_upper,
    known_exact_N,
    lower_bounds,
    profile_inequality_check,
)
from .cwc import ConstantWeightCode, graham_sloane_cwc
from .designs import affine_plane
from .errors import CapExceededError, ParameterError
from .hall import verify_multiset_hall
from .io import FormatError, dumps_code, parse_request, read_code, write_code
from .retrieval import DEFAULT_REQUEST_CAP, serve_request, verify_exhaustive
from .search import SearchCaps, exhaustive_optimal_N
from .setsystem import CodeParams, McbcCode, block_profile

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_PRECONDITION, EXIT_CAP = 0, 1, 2, 3, 4


class UsageError(Exception):
    """Flags are missing or inconsistent; maps to exit 2."""


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"method {args.method} needs {', '.join(missing)}")


# ------------------------------------------------------------------ construct


def _build_cwc_gs(args: argparse.Namespace) -> tuple[McbcCode, int]:
    _need(args, "k", "m", "r")
    w = args.w if args.w is not None else max(args.r, args.k - 2)
    code = graham_sloane_cwc(args.m, w)
    if args.n is not None:
        if args.n > len(code):
            raise ParameterError(f"need n <= {len(code)} codewords, got n={args.n}")
        code = ConstantWeightCode(code.length, code.weight, code.min_distance,
                                  code.supports[: args.n])
    return cons.construct_from_cwc(code, args.k, args.r), args.r


def _build(args: argparse.Namespace) -> tuple[McbcCode, int]:
    """Return the layout and the multiplicity it is built for."""
    method = args.method
    if method == "replication":
        _need(args, "n", "k", "m", "r")
        return cons.construct_replication(args.n, args.k, args.m, args.r), args.r
    if method == "small-n":
        _need(args, "n", "k", "m")
        return cons.construct_small_n_distinct(args.n, args.k, args.m), args.k - 1
    if method == "cwc-gs":
        return _build_cwc_gs(args)
    if method == "distance4":
        _need(args, "n", "k", "m", "r")
        return cons.construct_distance4(args.n, args.k, args.m, args.r), args.r
    if method == "diagonal":
        _need(args, "n", "k", "r")
        return cons.construct_diagonal(args.n, args.k, args.r), args.r
    if method == "steiner-affine":
        _need(args, "q", "k", "r")
        return cons.steiner_to_mcbc(affine_plane(args.q), args.k, args.r), args.r
    if method == "regular":
        _need(args, "n", "k", "m")
        return cons.construct_regular(args.n, args.k, args.m), args.k
    raise UsageError(f"unknown method {method}")


def cmd_construct(args: argparse.Namespace) -> int:
    try:
        code, r = _build(args)
    except ParameterError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    sys.stdout.write(dumps_code(code))
    print(f"n={code.n} m={code.m} N={code.N} k={args.k} r={r}", file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------------- verify


def _profile_lines(code: McbcCode, k: int, r: int) -> list[str]:
    prof = block_profile(code.item_view, k)
    sizes = " ".join(f"{i}:{c}" for i, c in enumerate(prof.counts))
    lines = [f"block profile: {sizes} >{k}:{prof.overflow}"]
    if r < k:
        ok = profile_inequality_check(prof, k, code.m, r)
        lines.append(f"profile inequality: {'holds' if ok else 'fails'}")
    else:
        lines.append("profile inequality: not applicable (r = k)")
    return lines


def cmd_verify(args: argparse.Namespace) -> int:
    code = read_code(args.code)
    if args.mode == "hall" and args.t != 1:
        raise UsageError("--mode hall requires --t 1; use --mode exhaustive")
    params = CodeParams(code.n, args.k, code.m, args.t, args.r)
    print(f"params: n={code.n} m={code.m} N={code.N} k={args.k} r={args.r} t={args.t}")
    for line in _profile_lines(code, args.k, args.r):
        print(line)
    if args.mode == "hall":
        result = verify_multiset_hall(code.item_view, args.k, args.r)
    else:
        result = verify_exhaustive(code, params, cap=args.cap)
    if result.valid:
        print("result: valid")
        return EXIT_OK
    print("result: invalid")
    w = result.witness
    if isinstance(w, tuple):
        print("blocks: " + " ".join(map(str, w)))
    else:
        print(f"request: {w}")
    return EXIT_INVALID


# ---------------------------------------------------------------------- serve


def cmd_serve(args: argparse.Namespace) -> int:
    code = read_code(args.code)
    req = parse_request(args.request)
    params = None
    if args.k is not None or args.r is not None:
        k = args.k if args.k is not None else max(req.size, 1)
        r = args.r if args.r is not None else 1
        params = CodeParams(code.n, k, code.m, args.t, r)
    req.validate(code.n, params)
    found = serve_request(code, req, args.t)
    if found is None:
        print("INFEASIBLE")
        return EXIT_INVALID
    for j, reads in enumerate(found.reads, start=1):
        if reads:
            print(f"server {j}: {' '.join(map(str, reads))}")
    return EXIT_OK


# --------------------------------------------------------------------- bounds


def cmd_bounds(args: argparse.Namespace) -> int:
    report = bounds_report(args.n, args.k, args.m, args.r)
    if args.search:
        caps = SearchCaps(args.max_n, args.max_m, args.max_k)
        found = exhaustive_optimal_N(args.n, args.k, args.m, args.r, caps)
        report.search_exact = found.value
        if args.witness:
            write_code(found.code, args.witness)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------- table


def _cell(fn: Callable[[], int | None]) -> str:
    try:
        value = fn()
    except ParameterError:
        return "-"
    return "-" if value is None else str(value)


def cmd_table(args: argparse.Namespace) -> int:
    if args.n_from > args.n_to:
        raise UsageError(f"empty range {args.n_from}..{args.n_to}")
    k, m, r = args.k, args.m, args.r
    print("n\tlower\texact\tupper")
    for n in range(args.n_from, args.n_to + 1):
        lower = _cell(lambda: max(lower_bounds(n, k, m, r).values()))
        exact = _cell(lambda: getattr(known_exact_N(n, k, m, r), "value", None))
        upper = _cell(lambda: construction_upper(n, k, m, r)[0])
        print(f"{n}\t{lower}\t{exact}\t{upper}")
    return EXIT_OK


# ---------------------------------------------------------------------- main

METHODS = ("replication", "small-n", "cwc-gs", "distance4", "diagonal", "steiner-affine", "regular")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcbc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="print a layout as code JSON")
    c.add_argument("--method", required=True, choices=METHODS)
    for flag in ("n", "k", "m", "r", "q", "w"):
        c.add_argument(f"--{flag}", type=positive_int)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check that a code serves all requests")
    v.add_argument("code", help="code JSON file")
    v.add_argument("--k", type=positive_int, required=True)
    v.add_argument("--r", type=positive_int, default=1)
    v.add_argument("--t", type=positive_int, default=1)
    v.add_argument("--mode", choices=("hall", "exhaustive"), default="hall")
    v.add_argument("--cap", type=positive_int, default=DEFAULT_REQUEST_CAP,
                   help=f"max requests for exhaustive mode (default {DEFAULT_REQUEST_CAP})")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("serve", help="find read sets for one request")
    s.add_argument("code", help="code JSON file")
    s.add_argument("request", help="comma-separated items, e.g. 3,3,4,4,5")
    s.add_argument("--t", type=positive_int, default=1)
    s.add_argument("--k", type=positive_int)
    s.add_argument("--r", type=positive_int)
    s.set_defaults(func=cmd_serve)

    b = sub.add_parser("bounds", help="lower bounds, exact values and constructions")
    for flag in ("n", "k", "m", "r"):
        b.add_argument(f"--{flag}", type=positive_int, required=True)
    b.add_argument("--search", action="store_true", help="run the exact search")
    defaults = SearchCaps()
    b.add_argument("--max-n", type=positive_int, default=defaults.max_n)
    b.add_argument("--max-m", type=positive_int, default=defaults.max_m)
    b.add_argument("--max-k", type=positive_int, default=defaults.max_k)
    b.add_argument("--witness", help="write the optimal layout found by --search here")
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("table", help="TSV of bounds over a range of n")
    for flag in ("k", "m", "r", "n-from", "n-to"):
        t.add_argument(f"--{flag}", type=positive_int, required=True)
    t.set_defaults(func=cmd_table)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, FormatError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
