"""Command line entry point ``pigraph``.

Exit codes: 0 success, 1 a queried property is false (``--assert-pi``,
a rejected witness), 2 bad input, 3 internal consistency violation.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path as FsPath

from pigraph.conditions import NotDI
from pigraph.cylinders import NotParadoxical, SynthesisBudgetExceeded, synthesize_witness, verify_witness
from pigraph.formats import parse_graph_file, parse_witness_file, render_dot, render_witness_json
from pigraph.graph_model import FiniteGraph, GraphError
from pigraph.report import classify, consistency_check, prepare, render_json, summary_lines
from pigraph.tails import brute_force_tails, enumerate_maximal_tails, tail_report

OK, FALSE, BAD_INPUT, INCONSISTENT = 0, 1, 2, 3


def _write(path: str, text: str) -> None:
    # write next to the target and rename, so readers never see half a file
    target = FsPath(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, target)


def _cmd_classify(args) -> int:
    g = parse_graph_file(args.file)
    report = classify(g, add_tails=args.add_tails, witnesses=args.witnesses)
    problems = consistency_check(report, g)
    if args.json:
        _write(args.json, render_json(report))
    if args.dot:
        _write(args.dot, render_dot(prepare(g, args.add_tails)[0]))
    print("\n".join(summary_lines(report)))
    if report.witnesses:
        print(f"witnesses: {len(report.witnesses)} verified")
    if problems:
        for p in problems:
            print(f"consistency violation: {p}", file=sys.stderr)
        return INCONSISTENT
    if args.assert_pi and not report.purely_infinite:
        return FALSE
    return OK


def _cmd_conditions(args) -> int:
    report = classify(parse_graph_file(args.file))
    c = report.conditions
    for name in ("K", "I", "DI", "DL", "essentially_principal"):
        print(f"{name:<22} {str(getattr(c, name)).lower()}")
    return OK


def _cmd_tails(args) -> int:
    g = parse_graph_file(args.file)
    if not isinstance(g, FiniteGraph):
        print("maximal tails are only enumerated for finite graphs", file=sys.stderr)
        return BAD_INPUT
    rep = tail_report(g)
    for t in rep.tails:
        print(f"T({t.generator}) = {{{', '.join(sorted(t.members))}}}")
    print(f"loop condition: {str(rep.loop_condition).lower()}")
    print(f"exit condition: {str(rep.exit_condition).lower()}")
    if args.oracle:
        fast = sorted(sorted(t.members) for t in enumerate_maximal_tails(g))
        slow = sorted(sorted(m) for m in brute_force_tails(g))
        print(f"oracle agrees: {str(fast == slow).lower()}")
        if fast != slow:
            return INCONSISTENT
    return OK


def _cmd_witness_synth(args) -> int:
    g, _ = prepare(parse_graph_file(args.file))
    try:
        w = synthesize_witness(g, args.vertex, args.budget)
    except (NotParadoxical, NotDI) as exc:
        print(f"not paradoxical: {exc}", file=sys.stderr)
        return FALSE
    except SynthesisBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return FALSE
    text = render_witness_json(w)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return OK


def _cmd_witness_verify(args) -> int:
    g = parse_graph_file(args.file)
    w = parse_witness_file(args.witness_file, g)
    problems = verify_witness(w, g)
    for p in problems:
        print(p)
    print("valid" if not problems else "invalid")
    return OK if not problems else FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pigraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="full classification report")
    c.add_argument("file")
    c.add_argument("--add-tails", action="store_true", help="attach infinite tails to sinks first")
    c.add_argument("--witnesses", action="store_true", help="synthesize witnesses when purely infinite")
    c.add_argument("--json", metavar="OUT")
    c.add_argument("--dot", metavar="OUT")
    c.add_argument("--assert-pi", action="store_true", help="exit 1 unless purely infinite")
    c.set_defaults(run=_cmd_classify)

    c = sub.add_parser("conditions", help="Conditions K, I, DI, DL")
    c.add_argument("file")
    c.set_defaults(run=_cmd_conditions)

    c = sub.add_parser("tails", help="maximal tails of a finite graph")
    c.add_argument("file")
    c.add_argument("--oracle", action="store_true", help="cross-check against subset enumeration")
    c.set_defaults(run=_cmd_tails)

    w = sub.add_parser("witness", help="paradoxical decompositions")
    wsub = w.add_subparsers(dest="action", required=True)
    c = wsub.add_parser("synth")
    c.add_argument("file")
    c.add_argument("--vertex", required=True, metavar="REF")
    c.add_argument("--budget", type=int, default=16)
    c.add_argument("--out", metavar="FILE")
    c.set_defaults(run=_cmd_witness_synth)
    c = wsub.add_parser("verify")
    c.add_argument("file")
    c.add_argument("witness_file")
    c.set_defaults(run=_cmd_witness_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
