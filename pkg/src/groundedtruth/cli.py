"""Command line front end: ``gt build``, ``gt fixpoint``, ``gt query``, ``gt verify``.

Exit codes: 0 success, 2 bad input, 3 universe cap exceeded, 4 internal
consistency failure, 5 query outside the fragment, 6 a suite found
violations.  Set ``GT_LOG=DEBUG`` (or INFO, ...) for progress logging.
"""

from __future__ import annotations

import argparse
import difflib
import json
import logging
import os
import sys
import time

from .engine import ConsistencyViolation, StateFormatError, load_state, outer_fixpoint
from .fragment import DEFAULT_CAP, FragmentFormatError, FragmentTooLarge, build_fragment, load_fragment
from .models import ModelError, NotAnObjectSentence, doubling_model, load_model
from .syntax import ParseError, Store, to_text
from .verify import SUITES, Valuation, Verdict, reports_json, reports_text, run_suites

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_INTERNAL, EXIT_MISS, EXIT_VIOLATION = 0, 2, 3, 4, 5, 6

log = logging.getLogger("groundedtruth")


class InputError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gt", description="Grounded truth over finite fragments.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a fragment and its seed sets")
    b.add_argument("--model", help="model JSON file or bundled model name (one, two, three)")
    b.add_argument("--surrogate-bound", type=int, metavar="N",
                   help="use the x = 2y model on 0..N instead of --model")
    b.add_argument("--depth", type=int, default=2, help="object nesting depth d")
    b.add_argument("--reflect", type=int, default=1, help="reflection depth r")
    b.add_argument("--with-liar", action="store_true")
    b.add_argument("--with-truthteller", action="store_true")
    b.add_argument("--literal-quantifiers", action="store_true",
                   help="seed only true quantified T-sentences, leaving the false ones ungrounded")
    b.add_argument("--no-schema-instances", action="store_true")
    b.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum universe size")
    b.add_argument("--out", required=True)

    f = sub.add_parser("fixpoint", help="compute the least fixed point of a fragment")
    f.add_argument("fragment")
    f.add_argument("--out", required=True)

    q = sub.add_parser("query", help="classify one sentence")
    q.add_argument("sentence")
    q.add_argument("--fragment", required=True)
    q.add_argument("--state", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--fragment", required=True)
    v.add_argument("--state", required=True)
    v.add_argument("--suite", default=",".join(SUITES),
                   help=f"comma separated subset of {','.join(SUITES)}")
    v.add_argument("--limit", type=int, default=None, help="sample at most this many instances per suite")
    v.add_argument("--seed", type=int, default=0, help="sampling seed")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out", help="write the report here instead of stdout")
    return p


def cmd_build(args) -> int:
    if (args.model is None) == (args.surrogate_bound is None):
        raise InputError("give exactly one of --model and --surrogate-bound")
    if args.depth < 1 or args.reflect < 1:
        raise InputError("depth and reflection depth must be at least 1")
    if args.surrogate_bound is not None and args.surrogate_bound < 2:
        raise InputError("the surrogate bound must be at least 2")
    model, base = doubling_model(args.surrogate_bound) if args.surrogate_bound is not None \
        else load_model(args.model)
    started = time.perf_counter()
    frag = build_fragment(Store(), model, base, args.depth, args.reflect,
                          liar=args.with_liar, truthteller=args.with_truthteller,
                          complete_quantifiers=not args.literal_quantifiers,
                          schema_instances=not args.no_schema_instances, cap=args.cap)
    frag.dump(args.out)
    print(f"universe {len(frag)} sentences ({time.perf_counter() - started:.2f}s)")
    print(f"seed sets: Z {len(frag.z)}, Z1 {len(frag.z1_fixed)}, Z2 {len(frag.z2_fixed)}, "
          f"Z3 {len(frag.z3)}, Z4 {len(frag.z4)}, negated Z3/Z4 completions {len(frag.z3_neg) + len(frag.z4_neg)}")
    for kind, f in frag.designated.items():
        print(f"{kind}: {to_text(f)}")
    return EXIT_OK


def cmd_fixpoint(args) -> int:
    frag = load_fragment(args.fragment)
    started = time.perf_counter()
    trace = outer_fixpoint(frag)
    trace.dump(args.out)
    val = Valuation(frag, trace)
    counts = {v: 0 for v in Verdict}
    for f in frag.universe:
        counts[val.classify(f)] += 1
    print(f"fixpoint reached at k={len(trace.iterates) - 1}: |U*| = {len(trace.fixpoint)} codes "
          f"({time.perf_counter() - started:.2f}s)")
    print(", ".join(f"{v.value} {n}" for v, n in counts.items()))
    for kind, f in frag.designated.items():
        print(f"{kind}: {val.classify(f).value}")
    return EXIT_OK


def _load(args):
    frag = load_fragment(args.fragment)
    trace = load_state(args.state, frag)
    return frag, Valuation(frag, trace)


def _nearest(frag, text: str) -> list[str]:
    candidates = [to_text(f) for f in frag.universe if abs(len(to_text(f)) - len(text)) <= max(8, len(text) // 3)]
    return difflib.get_close_matches(text, candidates[:20000], n=3, cutoff=0.5)


def cmd_query(args) -> int:
    frag, val = _load(args)
    try:
        f = frag.parse(args.sentence)
    except ParseError as exc:
        raise InputError(str(exc)) from exc
    if f not in frag:
        print(f"not in the fragment: {to_text(f)}")
        for hint in _nearest(frag, to_text(f)):
            print(f"  did you mean: {hint}")
        return EXIT_MISS
    verdict = val.classify(f)
    line = f"{verdict.value}  code {frag.code(f)}"
    stage = val.stage(f)
    if stage is not None:
        line += f"  stage {stage}" if verdict is Verdict.TRUE else f"  stage {stage} (negation)"
    print(line)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = [s.strip() for s in args.suite.split(",") if s.strip()]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InputError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    frag, val = _load(args)
    reports = run_suites(val, names, limit=args.limit, seed=args.seed)
    rendered = reports_json(reports) if args.format == "json" else reports_text(reports)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rendered + "\n")
        print("\n".join(f"{r.suite}: {'ok' if r.passed else f'{len(r.violations)} violations'}" for r in reports))
    else:
        print(rendered)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


COMMANDS = {"build": cmd_build, "fixpoint": cmd_fixpoint, "query": cmd_query, "verify": cmd_verify}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("GT_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except FragmentTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConsistencyViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InputError, ModelError, NotAnObjectSentence, ParseError, FragmentFormatError,
            StateFormatError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
