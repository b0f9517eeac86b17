"""Command-line frontend.

Subcommands: spread, hamming, simplex, decode, simulate, lrc
(build/repair/decode/table), verify, paper-tables.  Output is deterministic
for a fixed argv and seed: all randomness flows from the --seed flag through
Python's random.Random (Mersenne Twister), and JSON keys are sorted.

Exit status: 0 success, 1 usage or domain error, 2 detected-uncorrectable
decode, 3 search/enumeration budget exceeded.  Errors are a single
machine-parsable line ``error: <message>`` on stderr.  The environment
variable SUMRANK_BUDGET overrides the default search budgets.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import channel, codes, lrc, spreads, syndrome
from .errors import (
    BudgetExceeded,
    DecodingFailure,
    SumRankError,
)
from .galois import parse_matrix

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNCORRECTABLE = 2
EXIT_BUDGET = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_budget(fallback: int) -> int:
    raw = os.environ.get("SUMRANK_BUDGET")
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise SumRankError(f"SUMRANK_BUDGET must be an integer, got {raw!r}")


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _parse_dims(raw: str) -> list[int]:
    try:
        return [int(v) for v in raw.replace(",", " ").split()]
    except ValueError:
        raise SumRankError(f"bad dims list {raw!r}")


def _parse_vector(text: str) -> tuple[tuple[int, ...], "object"]:
    mat, ctx = parse_matrix(text)
    if mat.nrows != 1:
        raise SumRankError("vector files must have exactly one row")
    return mat.rows[0], ctx


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spread(args) -> int:
    budget = _default_budget(args.budget)
    if args.search or args.dims:
        if args.dims:
            result = spreads.search_partial_spread(
                args.q, args.r, dims=_parse_dims(args.dims), budget=budget
            )
        else:
            result = spreads.search_partial_spread(
                args.q, args.r, big_n=args.N, budget=budget
            )
        payload = json.loads(spreads.spread_to_json(result.family))
        payload["size"] = result.family.ell
        payload["certified"] = result.certified
        payload["nodes"] = result.nodes
        if result.bounds:
            payload["bounds"] = list(result.bounds)
    else:
        family = spreads.desarguesian_spread(args.q, args.N, args.r)
        payload = json.loads(spreads.spread_to_json(family))
        payload["size"] = family.ell
        payload["certified"] = True
        payload["bounds"] = list(spreads.spread_size_bounds(args.q, args.N, args.r))
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.output)
    return EXIT_OK


def cmd_hamming(args) -> int:
    code = codes.hamming_code(args.q, args.N, args.r)
    _emit(codes.code_to_json(code), args.output)
    return EXIT_OK


def cmd_simplex(args) -> int:
    code = codes.simplex_code(args.q, args.N, args.r)
    payload = json.loads(codes.code_to_json(code))
    payload["distance_bound"] = codes.simplex_distance_bound(args.q, args.N, args.r)
    budget = _default_budget(codes.DISTANCE_BUDGET)
    try:
        payload["measured_min_distance"] = codes.min_sumrank_distance(code, budget)
    except BudgetExceeded:
        payload["measured_min_distance"] = None
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.output)
    return EXIT_OK


def cmd_decode(args) -> int:
    code = codes.code_from_json(_read(args.code))
    received, ctx = _parse_vector(_read(args.received))
    if ctx.q != code.ctx.q or ctx.m != code.ctx.m:
        raise SumRankError("received vector field disagrees with the code")
    result = syndrome.decode(code, received)
    payload = {
        "codeword": list(result.codeword),
        "error_location": result.error_location,
        "error_vector": list(result.error_vector) if result.error_vector else None,
        "syndrome": list(result.syndrome),
        "ops": result.ops,
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    code = codes.code_from_json(_read(args.code))
    report = channel.simulate(
        code, trials=args.trials, t=args.t, rho=args.rho, seed=args.seed
    )
    _emit(json.dumps(report.as_dict(), sort_keys=True, indent=2), args.output)
    return EXIT_OK


def cmd_lrc(args) -> int:
    if args.action == "build":
        descriptor = lrc.hamming_lrc(args.q, args.N, args.r)
        _emit(lrc.lrc_to_json(descriptor), args.output)
        return EXIT_OK
    if args.action == "table":
        pairs = (
            [tuple(map(int, pair.split(":"))) for pair in args.pairs.split(",")]
            if args.pairs
            else list(lrc.PUBLISHED_PAIRS_Q2)
        )
        rows = lrc.lrc_parameter_table(args.q, pairs)
        lines = [lrc.TABLE_CSV_HEADER]
        lines += [",".join(str(v) for v in row.as_tuple()) for row in rows]
        _emit("\n".join(lines), args.output)
        return EXIT_OK
    descriptor = lrc.lrc_from_json(_read(args.lrc))
    erased = sorted(
        int(line) for line in _read(args.erased).split() if line.strip()
    )
    word_entries, ctx = _parse_vector(_read(args.word))
    if len(word_entries) != descriptor.total_length:
        raise SumRankError("word length disagrees with the code length")
    word: list[Optional[int]] = [
        None if i in set(erased) else v for i, v in enumerate(word_entries)
    ]
    if args.action == "repair":
        pattern = lrc.ErasurePattern.for_lrc(descriptor, erased)
        for group, erased_here in enumerate(pattern.per_group):
            if len(erased_here) == 1:
                word = lrc.local_repair(descriptor, word, erased_here, group=group)
        payload = {
            "word": list(word),
            "remaining_erasures": [i for i, v in enumerate(word) if v is None],
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2), args.output)
        return EXIT_OK
    if args.action == "decode":
        decoded = lrc.repair_then_decode(descriptor, word, erased)
        payload = {"codeword": list(decoded)}
        _emit(json.dumps(payload, sort_keys=True, indent=2), args.output)
        return EXIT_OK
    raise SumRankError(f"unknown lrc action {args.action!r}")


def cmd_paper_tables(args) -> int:
    comparisons = lrc.compare_with_published(args.q)
    lines = [lrc.TABLE_CSV_HEADER + ",published_local_groups,published_length,status"]
    for comp in comparisons:
        row = comp.computed
        status = (
            "ok"
            if comp.matches
            else "mismatch:" + "+".join(comp.mismatched_fields)
        )
        lines.append(
            ",".join(
                str(v)
                for v in row.as_tuple()
                + (comp.published.local_groups, comp.published.length, status)
            )
        )
    _emit("\n".join(lines), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify: the bound/identity suite
# ---------------------------------------------------------------------------

def _verify_one(q: int, big_n: int, r: int, budget: int, lines: list[str]) -> bool:
    ok = True

    def record(name: str, passed: bool, detail: str) -> None:
        nonlocal ok
        ok = ok and passed
        lines.append(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")

    lo, hi = spreads.spread_size_bounds(q, big_n, r)
    family = spreads.desarguesian_spread(q, big_n, r)
    record(
        f"spread-size q={q} N={big_n} r={r}",
        family.ell == hi and lo == hi,
        f"size={family.ell} bounds=({lo},{hi})",
    )
    code = codes.hamming_from_spread(family)
    record(
        f"distance3-check q={q} N={big_n} r={r}",
        codes.check_distance3(code),
        f"n={code.n} k={code.dimension}",
    )
    if code.dimension > 0:
        try:
            d = codes.min_sumrank_distance(code, budget)
            record(
                f"min-distance q={q} N={big_n} r={r}",
                d == 3,
                f"measured={d}",
            )
        except BudgetExceeded:
            lines.append(f"SKIP min-distance q={q} N={big_n} r={r}: over budget")
        record(
            f"perfect-code q={q} N={big_n} r={r}",
            codes.perfect_code_check(code),
            f"q^{code.dimension} * ball = q^{code.n}",
        )
    report = codes.length_bounds(q, 1, r, code.partition)
    window_ok = report.window_equality if report.applicable else True
    record(
        f"length-bounds q={q} N={big_n} r={r}",
        report.ok and (window_ok is None or window_ok or not report.applicable),
        f"n={report.n} caps=({report.projective_cap},{report.shots_times_cap})"
        + (f" window={report.window}" if report.window else ""),
    )
    simplex_cost = q ** r * code.n  # codeword count times per-word work
    if code.dimension > 0 and simplex_cost <= budget and code.dimension * code.n <= 1_000_000:
        simplex = codes.simplex_from_hamming(code)
        bound = codes.simplex_distance_bound(q, big_n, r)
        try:
            measured = codes.min_sumrank_distance(simplex, budget)
            record(
                f"simplex-bound q={q} N={big_n} r={r}",
                measured is not None and measured >= bound,
                f"measured={measured} bound={bound}",
            )
        except BudgetExceeded:
            lines.append(f"SKIP simplex-bound q={q} N={big_n} r={r}: over budget")
    elif code.dimension > 0:
        lines.append(f"SKIP simplex-bound q={q} N={big_n} r={r}: over budget")
    return ok


def cmd_verify(args) -> int:
    budget = _default_budget(codes.DISTANCE_BUDGET)
    lines: list[str] = []
    all_ok = True
    if args.grid:
        for q in (2, 3):
            for big_n in (1, 2, 3):
                for r in range(big_n, 9):
                    if r % big_n == 0:
                        all_ok = _verify_one(q, big_n, r, budget, lines) and all_ok
    else:
        if args.q is None or args.N is None or args.r is None:
            raise SumRankError("verify needs --q --N --r, or --grid")
        all_ok = _verify_one(args.q, args.N, args.r, budget, lines)
    _emit("\n".join(lines), args.output)
    return EXIT_OK if all_ok else EXIT_USAGE


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="sumrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p) -> None:
        p.add_argument("--output", help="write the result to this path instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="PRNG seed (Mersenne Twister)")

    p = sub.add_parser("spread", help="construct or search a partial spread")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--search", action="store_true", help="backtracking search instead of the N | r construction")
    p.add_argument("--dims", help="improper dimension profile, e.g. 2,2,1")
    p.add_argument("--budget", type=int, default=spreads.DEFAULT_SEARCH_BUDGET)
    common(p)
    p.set_defaults(func=cmd_spread)

    p = sub.add_parser("hamming", help="build a Hamming code and emit its descriptor")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_hamming)

    p = sub.add_parser("simplex", help="build a simplex code; report distance vs bound")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_simplex)

    p = sub.add_parser("decode", help="single-error syndrome decode")
    p.add_argument("--code", required=True, help="code descriptor JSON file")
    p.add_argument("--received", required=True, help="received vector (matrix text, one row)")
    common(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="seeded channel Monte-Carlo")
    p.add_argument("--code", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--rho", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("lrc", help="locally repairable codes")
    p.add_argument("action", choices=["build", "repair", "decode", "table"])
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--N", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--pairs", help="table pairs as N:r,N:r,...")
    p.add_argument("--lrc", help="LRC descriptor JSON file")
    p.add_argument("--word", help="word file (matrix text, one row)")
    p.add_argument("--erased", help="erased index file, one 0-based index per line")
    common(p)
    p.set_defaults(func=cmd_lrc)

    p = sub.add_parser("verify", help="run the bound/identity suite")
    p.add_argument("--q", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--grid", action="store_true", help="sweep q in {2,3}, N in {1,2,3}, r in N..8 with N | r")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("paper-tables", help="reference parameter table with discrepancy flags")
    p.add_argument("--q", type=int, default=2)
    common(p)
    p.set_defaults(func=cmd_paper_tables)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DecodingFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNCORRECTABLE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SumRankError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
