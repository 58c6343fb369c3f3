"""Command-line front end: counting, verification, construction checks, and
the power-of-two decomposition, with machine-readable reports.

Exit codes are a stable contract: 0 success, 1 property failure, 2 input
error, 3 budget exceeded, 4 theorem falsification.  JSON reports serialize
counts as decimal strings so consumers never lose precision; the
deterministic part of a report (everything except elapsed_ms and cache
statistics) is byte-identical across thread counts.  DEDEKIND_THREADS sets
the default thread count; the --threads flag wins.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time

from .errors import BudgetExceededError, FalsificationError, PosetParseError
from .monotone import count_monotone_oracle
from .partition import (
    DEFAULT_COVER_MODE,
    MemoCache,
    construct_layer_subset,
    construct_recursive_partition,
    corollary_split,
    count_via_partition,
    decompose_power_of_two,
    definitional_completeness_oracle,
    is_complete_partition,
    minimality_check,
    partition_terms,
)
from .poset import COVER_MODES, Point, Subposet, find_v3

DEFAULT_SEED = 20260819

_VERIFY_CAPS = {
    "1": 5,
    "corollary": 5,
    "2": 3,
    "3": 6,
    "lemma2": 4,
    "lemma3": 7,
    "4": 6,
}


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def _threads_default() -> int:
    raw = os.environ.get("DEDEKIND_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise PosetParseError(f"DEDEKIND_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise PosetParseError(f"DEDEKIND_THREADS must be positive, got {value}")
    return value


def _witness_dict(w) -> dict:
    return {
        "apex": str(w.apex),
        "arms": [str(w.arms[0]), str(w.arms[1])],
        "orientation": w.orientation,
    }


def _report(command: str, n, digest: str, result, *, threads: int = 1,
            cache: MemoCache | None = None, **extra) -> dict:
    rep = {"command": command, "n": n, "input_digest": digest, "result": result}
    rep.update(extra)
    rep["threads"] = threads
    rep["cache"] = (
        {"hits": cache.hits, "misses": cache.misses} if cache is not None
        else {"hits": 0, "misses": 0}
    )
    return rep


def _load_subposet(path: str) -> Subposet:
    try:
        with open(path, encoding="utf-8") as fh:
            return Subposet.from_text(fh.read())
    except OSError as exc:
        raise PosetParseError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands


def _cmd_count(args) -> tuple[dict, list[str], int]:
    if (args.n is None) == (args.poset is None):
        raise PosetParseError("count needs exactly one of --n or --poset")
    if args.n is not None:
        if args.n < 0:
            raise PosetParseError("--n must be >= 0")
        S = Subposet.cube(args.n)
        digest = _digest(f"cube:{args.n}")
        n = args.n
    else:
        S = _load_subposet(args.poset)
        digest = _file_digest(args.poset)
        n = S.dim
    strategy = args.strategy
    cache = MemoCache()
    value = count_via_partition(
        S,
        strategy,
        cache=cache,
        use_cache=not args.no_cache,
        threads=args.threads,
        max_nodes=args.max_nodes,
        budget_seconds=args.budget_seconds,
    )
    report = _report("count", n, digest, str(value), threads=args.threads, cache=cache)
    return report, [str(value)], 0


def _verify_theorem_1(args, rng, lines, failures):
    cases = []
    for idx in range(args.samples):
        density = rng.uniform(0.3, 0.95)
        s_masks = tuple(m for m in range(1 << args.n) if rng.random() < density)
        S = Subposet(args.n, s_masks)
        a_masks = tuple(m for m in s_masks if rng.random() < 0.5)
        A = Subposet(args.n, a_masks)
        total = sum(count_monotone_oracle(t.residual) for t in partition_terms(S, A))
        direct = count_monotone_oracle(S)
        ok = total == direct
        cases.append(ok)
        lines.append(f"case {idx + 1}: {'pass' if ok else 'FAIL'} "
                     f"(|S|={len(S)}, |A|={len(A)}, sum={total}, direct={direct})")
        if not ok:
            failures.append({
                "case": idx + 1,
                "S": [str(p) for p in S.points],
                "A": [str(p) for p in A.points],
                "term_sum": str(total),
                "direct": str(direct),
            })
    return cases


def _verify_corollary(args, rng, lines, failures):
    cases = []
    cache = MemoCache()
    expected = count_via_partition(Subposet.cube(args.n), cache=cache)
    for mask in range(1 << args.n):
        a = Point(mask, args.n)
        u, l = corollary_split(args.n, a, cache=cache)
        ok = u + l == expected
        cases.append(ok)
        lines.append(f"pivot {a}: {'pass' if ok else 'FAIL'} ({u} + {l} = {u + l})")
        if not ok:
            failures.append({"pivot": str(a), "upper_removed": str(u),
                             "lower_removed": str(l), "expected": str(expected)})
    return cases


def _verify_theorem_2(args, rng, lines, failures):
    S = Subposet.cube(args.n)
    size = 1 << args.n
    agree = {mode: 0 for mode in COVER_MODES}
    disagreements = {mode: [] for mode in COVER_MODES}
    total = 1 << size
    for bits in range(total):
        A = Subposet(args.n, tuple(m for m in range(size) if bits >> m & 1))
        truth = definitional_completeness_oracle(A, S)
        for mode in COVER_MODES:
            if is_complete_partition(A, S, mode) == truth:
                agree[mode] += 1
            else:
                disagreements[mode].append(A)
    cases = []
    for mode in COVER_MODES:
        ok = agree[mode] == total
        cases.append(ok)
        lines.append(f"mode {mode}: agrees with the definitional oracle on "
                     f"{agree[mode]}/{total} subsets"
                     + ("" if ok else " (disagrees on "
                        + ", ".join("{" + ",".join(str(p) for p in A.points) + "}"
                                    for A in disagreements[mode][:3])
                        + (", ..." if len(disagreements[mode]) > 3 else "") + ")"))
    full = [mode for mode in COVER_MODES if agree[mode] == total]
    lines.append(f"fully agreeing mode(s): {', '.join(full) if full else 'none'}; "
                 f"package default: {DEFAULT_COVER_MODE}")
    # the experiment passes when at least one mode agrees everywhere and the
    # package documents an agreeing mode as its default
    verdict = bool(full) and DEFAULT_COVER_MODE in full
    if not verdict:
        failures.append({
            "agreement": {m: agree[m] for m in COVER_MODES},
            "default": DEFAULT_COVER_MODE,
        })
    return [verdict]


def _verify_theorem_3(args, rng, lines, failures):
    cases = []
    for i in range(1, args.n + 1):
        bit = 1 << (i - 1)
        for parity in ("even", "odd"):
            seed = Subposet(args.n, tuple(
                m for m in construct_layer_subset(args.n, parity).masks if m & bit))
            A = construct_recursive_partition(args.n, i, seed)
            ok = (is_complete_partition(A, Subposet.cube(args.n))
                  and len(A) == 1 << (args.n - 1))
            cases.append(ok)
            lines.append(f"coordinate {i}, {parity} seed: "
                         f"{'pass' if ok else 'FAIL'} (|A|={len(A)})")
            if not ok:
                failures.append({"coordinate": i, "parity": parity,
                                 "A": [str(p) for p in A.points]})
    return cases


def _verify_lemma2(args, rng, lines, failures):
    S = Subposet.cube(args.n)
    size = 1 << args.n
    half = 1 << (args.n - 1)
    if args.n <= 3:
        pool = [tuple(m for m in range(size) if bits >> m & 1)
                for bits in range(1 << size)]
        label = f"exhaustive over {len(pool)} subsets"
    else:
        pool = [tuple(m for m in range(size) if rng.random() < rng.uniform(0.2, 0.9))
                for _ in range(args.samples)]
        pool += [construct_layer_subset(args.n, p).masks for p in ("even", "odd")]
        label = f"{len(pool)} sampled subsets"
    checked = violations = 0
    for masks in pool:
        A = Subposet(args.n, masks)
        if not A.masks or not is_complete_partition(A, S):
            continue
        checked += 1
        v_free = find_v3(A) is None
        ok = len(A) >= half and ((len(A) == half) == v_free)
        if not ok:
            violations += 1
            failures.append({"A": [str(p) for p in A.points], "size": len(A),
                             "v_free": v_free, "bound": half})
    lines.append(f"{label}: {checked} complete partitions, "
                 f"{violations} size-law violations")
    return [violations == 0]


def _verify_lemma3(args, rng, lines, failures):
    cases = []
    S = Subposet.cube(args.n)
    for parity in ("even", "odd"):
        A = construct_layer_subset(args.n, parity)
        complete = is_complete_partition(A, S)
        v_free = find_v3(A) is None
        sized = len(A) == 1 << (args.n - 1)
        ok = complete and v_free and sized
        cases.append(ok)
        lines.append(f"{parity} layer: complete={complete}, v_free={v_free}, "
                     f"size={len(A)} -> {'pass' if ok else 'FAIL'}")
        if not ok:
            failures.append({"parity": parity, "complete": complete,
                             "v_free": v_free, "size": len(A)})
    return cases


def _verify_theorem_4(args, rng, lines, failures):
    cases = []
    expected = count_via_partition(Subposet.cube(args.n))
    for parity in ("even", "odd"):
        poly = decompose_power_of_two(args.n, parity)
        ok = poly.value() == expected
        cases.append(ok)
        lines.append(f"{parity}: {poly} = {poly.value()} "
                     f"{'==' if ok else '!='} {expected}")
        if not ok:
            failures.append({"parity": parity, "polynomial": poly.as_dict(),
                             "value": str(poly.value()), "expected": str(expected)})
    return cases


_VERIFY_RUNNERS = {
    "1": (_verify_theorem_1, "partition identity on random (S, A) pairs"),
    "corollary": (_verify_corollary, "single-point split sums"),
    "2": (_verify_theorem_2, "completeness equivalence experiment"),
    "3": (_verify_theorem_3, "mirror-complement construction"),
    "lemma2": (_verify_lemma2, "complete-partition size law"),
    "lemma3": (_verify_lemma3, "layer subsets are minimal complete partitions"),
    "4": (_verify_theorem_4, "power-of-two decomposition"),
}


def _cmd_verify(args) -> tuple[dict, list[str], int]:
    cap = _VERIFY_CAPS[args.theorem]
    floor = 2 if args.theorem in ("2", "3", "lemma2", "lemma3", "4") else 1
    if not floor <= args.n <= cap:
        raise PosetParseError(
            f"--theorem {args.theorem} supports {floor} <= n <= {cap}, got {args.n}")
    rng = random.Random(args.seed)
    runner, title = _VERIFY_RUNNERS[args.theorem]
    lines = [f"verify {args.theorem}: {title} (n={args.n})"]
    failures: list[dict] = []
    cases = runner(args, rng, lines, failures)
    passed = sum(cases)
    lines.append(f"{passed}/{len(cases)} checks passed")
    result = {"checks": len(cases), "passed": passed}
    report = _report("verify", args.n, _digest(
        f"verify:{args.theorem}:{args.n}:{args.samples}:{args.seed}"), result,
        theorem=args.theorem, seed=args.seed,
        witnesses=failures)
    return report, lines, 0 if passed == len(cases) else 1


def _cmd_decompose(args) -> tuple[dict, list[str], int]:
    if not 2 <= args.n <= 6:
        raise PosetParseError(f"decompose supports 2 <= n <= 6, got {args.n}")
    poly = decompose_power_of_two(
        args.n, args.parity,
        max_nodes=args.max_nodes, budget_seconds=args.budget_seconds)
    value = poly.value()
    polynomial = {str(j): str(c) for j, c in poly.terms}
    if args.format == "text":
        lines = [f"{poly} = {value}"]
    elif args.format == "csv":
        lines = ["exponent,coefficient"]
        lines += [f"{j},{c}" for j, c in poly.terms]
        lines.append(f"value,{value}")
    else:
        lines = []
    report = _report("decompose", args.n, _digest(f"decompose:{args.n}:{args.parity}"),
                     str(value), polynomial=polynomial, parity=args.parity)
    return report, lines, 0


def _cmd_check_complete(args) -> tuple[dict, list[str], int]:
    A = _load_subposet(args.subset)
    if args.n is not None and args.n != A.dim:
        raise PosetParseError(
            f"--n {args.n} does not match the subset file dimension {A.dim}")
    n = A.dim
    if n < 1:
        raise PosetParseError("check-complete needs dimension >= 1")
    S = Subposet.cube(n)
    mode = args.mode
    complete = is_complete_partition(A, S, mode)
    witness = find_v3(S.minus(A), mode)
    classification = minimality_check(A, n)
    lines = [
        f"subset of E^{n}, size {len(A)}",
        f"complete ({mode} covers): {'yes' if complete else 'no'}",
    ]
    if witness is not None:
        lines.append(f"remainder V-shape: apex {witness.apex}, "
                     f"arms {witness.arms[0]} and {witness.arms[1]}, "
                     f"orientation {witness.orientation}")
    lines.append(f"classification: {classification}")
    result = {
        "complete": complete,
        "size": len(A),
        "minimality": classification,
        "mode": mode,
    }
    report = _report("check-complete", n, _file_digest(args.subset), result,
                     witnesses=[_witness_dict(witness)] if witness else [])
    return report, lines, 0


# ---------------------------------------------------------------------------
# parser and entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dedekind",
        description="Exact counting of monotone 0/1 maps on subposets of the n-cube.",
        epilog="DEDEKIND_THREADS sets the default thread count; --threads wins.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("count", help="count monotone maps on a cube or a poset file")
    p.add_argument("--n", type=int, help="full cube dimension")
    p.add_argument("--poset", help="poset file (n=<dim> header, one point per line)")
    p.add_argument("--strategy", choices=("single", "layer"), default="single",
                   help="top-level pivot strategy (default single)")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--no-cache", action="store_true",
                   help="disable the canonical-form memo table")
    p.add_argument("--max-nodes", type=int, default=None,
                   help="abort after this many engine nodes (exit 3)")
    p.add_argument("--budget-seconds", type=float, default=None,
                   help="abort after this much wall time (exit 3)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("verify", help="run a property suite for one statement")
    p.add_argument("--theorem", required=True, choices=tuple(_VERIFY_RUNNERS),
                   help="which statement to exercise")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=50,
                   help="sample count for randomized suites (default 50)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"RNG seed, echoed in the report (default {DEFAULT_SEED})")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=_cmd_verify, threads=1)

    p = sub.add_parser("decompose",
                       help="write D(E^n) as an exact polynomial in powers of two")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--parity", choices=("even", "odd"), default="even")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--budget-seconds", type=float, default=None)
    p.set_defaults(handler=_cmd_decompose, threads=1)

    p = sub.add_parser("check-complete",
                       help="test whether a subset completely partitions its cube")
    p.add_argument("--subset", required=True, help="subset file (poset format)")
    p.add_argument("--n", type=int, default=None,
                   help="expected dimension (cross-checked against the file)")
    p.add_argument("--mode", choices=COVER_MODES, default=DEFAULT_COVER_MODE)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=_cmd_check_complete, threads=1)

    return parser


def _emit(report: dict, lines: list[str], fmt: str, elapsed_ms: int) -> None:
    if fmt == "json":
        report["elapsed_ms"] = elapsed_ms
        print(json.dumps(report, sort_keys=True))
    else:
        for line in lines:
            print(line)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "threads", None) is None:
            args.threads = _threads_default()
        if args.threads < 1:
            raise PosetParseError("--threads must be positive")
        start = time.monotonic()
        report, lines, code = args.handler(args)
        elapsed_ms = int((time.monotonic() - start) * 1000)
    except PosetParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except FalsificationError as exc:
        print(f"FALSIFIED: {exc}", file=sys.stderr)
        return 4
    _emit(report, lines, args.format, elapsed_ms)
    return code


if __name__ == "__main__":
    sys.exit(main())
