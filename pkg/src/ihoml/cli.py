"""Command line: ``ihoml check``, ``ihoml suite`` and ``ihoml eval``.

Exit codes: 0 success, 1 verdict differs from the expected table,
2 usage, parse or type error, 3 inconclusive because the budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys

from .carriers import raw_to_json
from .evaluator import evaluate
from .errors import BudgetExhausted, IhomlError, ParseError, TypeCheckError
from .model import FrameClass, load_model
from .report import (CONSISTENCY, CORE, LINE41, expected_table, render_report, render_suite, run_check,
                     run_suite, suite_to_json, verdict_matches)
from .search import DEFAULT_BUDGET, STRATEGIES, UNKNOWN, Bounds, definitions_of
from .syntax import parse_term
from .types import SIGMA, TRU, format_type
from .variants import build_variant

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
VARIANTS = ("scott", "anderson", "fitting")


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _seed(text):
    n = int(text, 0)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ihoml", description="Bounded model checking for higher-order modal logic.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check goals of one variant within size bounds")
    c.add_argument("--variant", required=True, choices=VARIANTS + (CORE,))
    c.add_argument("--logic", default="KB", type=str.upper, choices=[f.value for f in FrameClass])
    c.add_argument("--goal", action="append", default=[],
                   help=f"goal name, repeatable; 'all' for every goal, '{CONSISTENCY}' for model finding")
    c.add_argument("--max-worlds", type=_positive, default=2)
    c.add_argument("--max-entities", type=_positive, default=1)
    c.add_argument("--strategy", choices=STRATEGIES, default="auto")
    c.add_argument("--seed", type=_seed, default=0)
    c.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                   help="candidate interpretations to evaluate (default from IHOML_BUDGET or 10^8)")
    c.add_argument("--samples", type=_positive, default=10**5, help="instances per sampled schema check")
    c.add_argument("--prune", action="store_true", help="restrict P along accessibility components (countermodels only)")
    c.add_argument("--workers", type=_positive, default=1)
    c.add_argument("--time-limit", type=float, default=None, help="seconds per size before giving up")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--expect", action="store_true", help="compare against the expected-verdict table")
    c.add_argument("--deterministic", action="store_true", help="omit timings from JSON output")
    c.add_argument("--output", help="also write the JSON report to this file")

    s = sub.add_parser("suite", help="run the expected-verdict table")
    s.add_argument("--variant", default="all", choices=("all",) + VARIANTS + (CORE,))
    s.add_argument("--paper-table", action="store_true", help="only rows backed by published claims")
    s.add_argument("--seed", type=_seed, default=None)
    s.add_argument("--budget", type=_positive, default=None, help="override every row's budget")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--deterministic", action="store_true")
    s.add_argument("--output", help="also write the JSON report to this file")

    e = sub.add_parser("eval", help="evaluate a formula on a model file")
    e.add_argument("--model", required=True, help="model JSON file")
    e.add_argument("--formula", required=True)
    e.add_argument("--variant", choices=VARIANTS, help="bind the variant's definitions (G, E, NE, ...)")
    e.add_argument("--logic", default="K", type=str.upper, choices=[f.value for f in FrameClass])
    return ap


def _goals_for(args, spec):
    goals = args.goal or ["all"]
    if args.variant == CORE:
        return [LINE41]
    out = []
    for g in goals:
        if g == "all":
            out.extend(spec.goals)
        elif g == CONSISTENCY or g in spec.goals:
            out.append(g)
        else:
            raise KeyError(f"{args.variant} has no goal {g!r}; known: {', '.join([CONSISTENCY, *spec.goals])}")
    return list(dict.fromkeys(out))


def _expected_row(variant, logic, goal, strategy):
    rows = [r for r in expected_table()["rows"]
            if (r["variant"], r["logic"], r["goal"]) == (variant, logic, goal)]
    for r in rows:
        if r.get("strategy") == strategy:
            return r
    exhaustive = [r for r in rows if r.get("strategy") != "randomized"]
    return (exhaustive or rows or [None])[0]


def _write(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def cmd_check(args) -> int:
    spec = None if args.variant == CORE else build_variant(args.variant)
    goals = _goals_for(args, spec)
    bounds = Bounds(max_worlds=args.max_worlds, max_entities=args.max_entities, strategy=args.strategy,
                    seed=args.seed, budget=args.budget, samples=args.samples, prune=args.prune,
                    workers=args.workers, time_limit=args.time_limit)
    try:
        rep = run_check(args.variant, goals, args.logic, bounds)
    except BudgetExhausted as err:
        print(f"inconclusive: {err}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    text = rep.dumps(args.deterministic)
    _write(text, args.output)
    print(text if args.format == "json" else render_report(rep))
    if args.expect:
        status = EXIT_OK
        for goal, v in sorted(rep.verdicts.items()):
            row = _expected_row(args.variant, rep.logic, goal, args.strategy)
            if row is None:
                print(f"no expected verdict for {args.variant} {rep.logic} {goal}", file=sys.stderr)
                return EXIT_USAGE
            if not verdict_matches(row, v):
                print(f"mismatch {goal}: expected {row['expect']}, observed {v.summary()}", file=sys.stderr)
                status = EXIT_MISMATCH
        return status
    if any(v.tag == UNKNOWN and (v.stats.get("budget_exhausted") or v.stats.get("timed_out"))
           for v in rep.verdicts.values()):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_suite(args) -> int:
    progress = None if args.format == "json" else (lambda msg: print(f"running {msg}", file=sys.stderr, flush=True))
    result = run_suite(args.variant, args.paper_table, args.seed, args.budget, progress)
    text = suite_to_json(result, args.deterministic)
    _write(text, args.output)
    print(text if args.format == "json" else render_suite(result))
    return EXIT_MISMATCH if result["mismatches"] else EXIT_OK


def cmd_eval(args) -> int:
    spec = build_variant(args.variant) if args.variant else None
    signature = dict(spec.signature) if spec else None
    model = load_model(args.model, FrameClass.parse(args.logic), signature)
    extra = definitions_of(spec, model) if spec else {}
    sig = {name: v.ty for name, v in model.interp}
    sig.update({k: v.ty for k, v in extra.items()})
    term = parse_term(args.formula, sig)
    value = evaluate(term, model=model, extra=extra)
    print(f"model: {model.describe()}")
    if value.ty == SIGMA:
        for w, b in enumerate(value.raw):
            print(f"w{w}  {str(b).lower()}")
        print(f"valid: {str(all(value.raw)).lower()}")
    elif value.ty == TRU:
        print(f"value: {str(value.raw).lower()}")
    else:
        print(f"type {format_type(value.ty)}: {json.dumps(raw_to_json(value.raw))}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"check": cmd_check, "suite": cmd_suite, "eval": cmd_eval}[args.command]
    try:
        return handler(args)
    except (ParseError, TypeCheckError) as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (IhomlError, KeyError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
