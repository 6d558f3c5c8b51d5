"""Command line entry point: classify, construct, corpus."""
from __future__ import annotations

import argparse
import difflib
import sys
import time
import zlib
from pathlib import Path

from . import __version__
from .classifier import classify_all
from .construction import ConstructionConfig, ExponentMap, construct_and_check, serialize_trace
from .errors import AlgebraError, WitnessVerificationFailed
from .reports import (
    construction_report_document,
    dumps,
    load_spec,
    report_document,
    text_report,
    verdict_table,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _error(e: Exception) -> int:
    print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
    return EXIT_USAGE


def cmd_classify(args) -> int:
    try:
        spec = load_spec(args.input)
        start = time.perf_counter()
        rep = classify_all(spec.presentation(), trials=args.trials, seed=args.seed)
        elapsed = time.perf_counter() - start
    except AlgebraError as e:
        return _error(e)
    if args.format == "structured":
        doc = report_document(spec, rep, args.seed, args.trials, timing=elapsed if args.timing else None)
        sys.stdout.write(dumps(doc))
    else:
        sys.stdout.write(text_report(spec, rep))
        if args.timing:
            print(f"time: {elapsed:.3f}s")
    return EXIT_OK


def cmd_construct(args) -> int:
    try:
        qs = [ExponentMap.parse(t) for t in (args.q or ["i"])]
        if len(qs) > 2:
            raise AlgebraError("give at most two --q values")
        cfg = ConstructionConfig(n=args.n, precision=args.precision, steps=args.steps, q=qs[0],
                                 max_x_degree=args.max_x_degree, max_height=args.max_height,
                                 seed=args.seed)
        report = construct_and_check(cfg, qs[1] if len(qs) == 2 else None)
    except WitnessVerificationFailed as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL
    except AlgebraError as e:
        return _error(e)
    trace_text = serialize_trace(report)
    if args.trace:
        Path(args.trace).write_text(trace_text, encoding="utf-8")
    if args.format == "structured":
        sys.stdout.write(dumps(construction_report_document(report)))
    else:
        for c in report.checks:
            status = "pass" if c.passed else "FAIL"
            print(f"{c.name}: {status}" + (f" ({c.detail})" if c.detail else ""))
    return EXIT_OK if report.passed else EXIT_FAIL


def entry_seed(master: int, name: str) -> int:
    """Per-entry seed so corpus entries do not depend on each other's order."""
    return (master * 1_000_003 + zlib.crc32(name.encode("utf-8"))) % (2 ** 31)


def cmd_corpus(args) -> int:
    root = Path(args.corpus)
    if not root.is_dir():
        return _error(FileNotFoundError(f"corpus directory {root} does not exist"))
    specs = sorted(root.glob("*.ring"))
    if not specs:
        print(f"warning: no *.ring files in {root}", file=sys.stderr)
        return EXIT_OK
    failures = 0
    for path in specs:
        expected_path = path.with_suffix(".expected")
        try:
            spec = load_spec(path)
            rep = classify_all(spec.presentation(), trials=args.trials, seed=entry_seed(args.seed, path.stem))
        except AlgebraError as e:
            print(f"{path.name}: ", end="", file=sys.stderr)
            _error(e)
            failures += 1
            continue
        table = verdict_table(rep)
        if args.update:
            expected_path.write_text(table, encoding="utf-8")
            print(f"updated {expected_path.name}")
            continue
        expected = expected_path.read_text(encoding="utf-8") if expected_path.exists() else ""
        if expected == table:
            print(f"ok {path.name}")
        else:
            failures += 1
            print(f"MISMATCH {path.name}")
            sys.stdout.writelines(difflib.unified_diff(
                expected.splitlines(keepends=True), table.splitlines(keepends=True),
                fromfile=str(expected_path), tofile=f"{path.name} (computed)",
            ))
    return EXIT_FAIL if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="precompletion", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a ring file")
    c.add_argument("--input", required=True, help="ring file")
    c.add_argument("--format", choices=("text", "structured"), default="text")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--trials", type=int, default=20, help="random linear forms tried in the depth search")
    c.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte determinism)")
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("construct", help="run the z-selection construction and check its certificates")
    k.add_argument("--n", type=int, default=2, help="number of variables")
    k.add_argument("--precision", type=int, default=5, help="truncation order K")
    k.add_argument("--steps", type=int, default=4, help="number N of z_i to report")
    k.add_argument("--q", action="append", help="exponent map: list like 1,2,4 or form like 2*i+1; "
                                                "give twice to check that the two u's differ")
    k.add_argument("--max-x-degree", type=int, default=2)
    k.add_argument("--max-height", type=int, default=4)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--trace", help="write the line-oriented trace to this path")
    k.add_argument("--format", choices=("text", "structured"), default="text")
    k.set_defaults(func=cmd_construct)

    g = sub.add_parser("corpus", help="check or update golden verdict tables")
    g.add_argument("--corpus", required=True, help="directory of *.ring files with *.expected tables")
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--check", action="store_true", default=True)
    mode.add_argument("--update", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--trials", type=int, default=20)
    g.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
