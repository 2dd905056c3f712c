"""Command-line front end: ``python -m twowaycg <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys

from . import cg1, cg2
from .annot import annotate
from .core import (
    RIGHT_END,
    FormatError,
    OneWayNfa,
    TwoWayNfa,
    annotated_alphabet,
    annotated_token,
    dump,
    fixture_a1,
    fixture_a2,
    format_annotated,
    load,
    parse,
    parse_annotated,
    serialize,
    word_from_text,
)
from .engine import DEFAULT_CAP, ResourceLimitError, decide, unfold
from .tables import (
    encode_rel,
    encode_set,
    ltable,
    qx_1nfa,
    qx_2nfa,
    s_star_relation,
    t_relation,
)
from .verify import (
    annotation_spec,
    check_clock,
    check_fragments,
    check_property_d,
    check_tables_suite,
    oracle_membership,
    random_1nfa,
    random_2nfa,
    random_long_words,
    words_upto,
)

FIXTURES = {"a1": fixture_a1, "a2": fixture_a2}
SOURCE_TAG = "#source "
MODE_TAG = "#mode "


class UsageError(Exception):
    pass


def load_automaton(spec):
    """A path, or ``fixture:a1`` / ``fixture:a2``."""
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1].lower()
        if name not in FIXTURES:
            raise UsageError(f"unknown fixture {name!r}")
        return FIXTURES[name]()
    try:
        return load(spec)
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc.strerror}") from None


def _emit(args, data, text):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _mode_for(automaton, mode):
    expected = "cg1" if isinstance(automaton, OneWayNfa) else "cg2"
    if mode is None:
        return expected
    if mode != expected:
        raise UsageError(f"mode {mode} needs a {'1nfa' if mode == 'cg1' else '2nfa'} automaton")
    return mode


# -- commands --------------------------------------------------------------


def cmd_oracle(args):
    automaton = load_automaton(args.automaton)
    word = word_from_text(args.word, automaton.alphabet)
    member = oracle_membership(automaton, word)
    _emit(args, {"word": " ".join(word), "member": member}, "true" if member else "false")
    return 0


def cmd_tables(args):
    automaton = load_automaton(args.automaton)
    prefix = word_from_text(args.prefix, automaton.alphabet)
    if isinstance(automaton, OneWayNfa):
        if args.op != "qx":
            raise UsageError(f"op {args.op} needs a 2nfa automaton")
        states = qx_1nfa(automaton, prefix)
        _emit(args, {"op": "qx", "states": sorted(states), "bits": encode_set(states, automaton.n)},
              encode_set(states, automaton.n))
        return 0
    n = automaton.n
    if args.op == "qx":
        states = qx_2nfa(automaton, prefix, args.cap)
        _emit(args, {"op": "qx", "states": sorted(states), "bits": encode_set(states, n)},
              encode_set(states, n))
        return 0
    table = ltable(automaton, prefix, args.cap)
    if args.op == "ltable":
        relation = table
    else:
        symbol = args.symbol
        if symbol not in automaton.alphabet + (RIGHT_END,):
            raise UsageError(f"unknown symbol {symbol!r}")
        if args.op == "sstar":
            relation = s_star_relation(automaton, table, symbol)
        else:
            relation = t_relation(automaton, table, symbol, args.k)
    bits = encode_rel(relation, n)
    _emit(args, {"op": args.op, "pairs": sorted(map(list, relation)), "bits": bits}, bits)
    return 0


def cmd_convert(args):
    automaton = load_automaton(args.automaton)
    mode = _mode_for(automaton, args.mode)
    letters = annotated_alphabet(automaton.alphabet)
    if mode == "cg1":
        explicit, vm_states = cg1.compile_explicit(cg1.build_cg1(automaton), args.cap)
    else:
        if args.max_len is None:
            raise UsageError("cg2 conversion needs --max-len (inputs to cover)")
        machine = cg2.build_cg2(automaton)
        inputs = [x for k in range(args.max_len + 1) for x in itertools.product(letters, repeat=k)]
        explicit, vm_states = unfold(machine, letters, args.cap, inputs=inputs)
    text = serialize(explicit)
    text += MODE_TAG + mode + "\n"
    text += "".join(SOURCE_TAG + line + "\n" for line in serialize(automaton).splitlines())
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    info = {"mode": mode, "states": explicit.n, "vm_states": vm_states, "output": args.output}
    if args.output:
        _emit(args, info, f"{explicit.n} states ({vm_states} reachable machine states)")
    return 0


def _embedded_source(path):
    mode, lines = None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith(SOURCE_TAG):
                lines.append(line[len(SOURCE_TAG):])
            elif line.startswith(MODE_TAG):
                mode = line[len(MODE_TAG):].strip()
    return mode, (parse("".join(lines)) if lines else None)


def cmd_simulate(args):
    machine = load_automaton(args.machine)
    source_mode, source = (None, None)
    if not args.machine.startswith("fixture:"):
        source_mode, source = _embedded_source(args.machine)
    if args.mode is not None:
        # the machine file is a source automaton: run the construction itself
        source, source_mode = machine, _mode_for(machine, args.mode)
        machine = cg1.build_cg1(source) if source_mode == "cg1" else cg2.build_cg2(source)
        if args.annot == "none":
            raise UsageError("--mode needs annotated input (--annot auto or file)")
        tokens = False
    else:
        tokens = args.annot != "none"
    if args.annot == "file":
        with open(args.word, encoding="utf-8") as fh:
            x = parse_annotated(fh.read())
    elif args.annot == "auto":
        if source is None:
            raise UsageError("--annot auto needs a converted machine or --mode")
        word = word_from_text(args.word, source.alphabet)
        x = annotate(annotation_spec(source_mode, source), word)
    else:
        x = word_from_text(args.word, machine.alphabet)
    if tokens:
        tape = tuple(annotated_token(s) for s in x)
        unknown = [t for t in tape if t not in machine.alphabet]
        if unknown:
            raise UsageError(f"unknown symbol {unknown[0]!r}")
    else:
        tape = x
    out = decide(machine, tape, args.cap)
    verdict = {(True, False): "ACCEPT", (False, True): "REJECT", (False, False): "NEITHER",
               (True, True): "BOTH"}[(out.accept_path, out.reject_path)]
    shown = format_annotated(x) if args.annot != "none" else " ".join(x)
    _emit(args, {"input": shown, "accept_path": out.accept_path,
                 "reject_path": out.reject_path, "verdict": verdict}, verdict)
    return 0


def cmd_verify(args):
    rng = random.Random(args.seed)
    if args.automaton:
        automata = [(args.automaton, load_automaton(args.automaton))]
    else:
        mode = args.mode
        make = random_1nfa if mode == "cg1" else random_2nfa
        automata = [(f"random-{i}", make(args.n, rng=rng)) for i in range(args.random)]
    reports = []
    for name, automaton in automata:
        if args.mode in ("cg1", "cg2"):
            mode = _mode_for(automaton, args.mode)
            long_words = []
            if args.long_words:
                block = cg2.build_cg2(automaton).block if mode == "cg2" else automaton.n
                lengths = list(range(block, 2 * block + 3))
                long_words = random_long_words(automaton.alphabet, lengths, args.long_words, args.seed)
            report = check_property_d(
                mode, automaton, args.max_len, args.samples, args.seed, name,
                mutate=args.mutate, long_words=long_words, jobs=args.jobs, cap=args.cap,
            )
        else:
            if not isinstance(automaton, TwoWayNfa):
                raise UsageError(f"mode {args.mode} needs a 2nfa automaton")
            if args.mode == "tables":
                report = check_tables_suite(automaton, args.max_len, name=name)
            else:
                spec = annotation_spec("cg2", automaton)
                inputs = [annotate(spec, w) for w in words_upto(automaton.alphabet, args.max_len)]
                check = check_fragments if args.mode == "fragments" else check_clock
                report = check(automaton, inputs, name=name, cap=args.cap)
        reports.append(report)
    ok = all(r.ok for r in reports)
    if args.mutate:
        # a mutated build must be caught: success means a malformed-accept witness
        ok = any(r.witnesses("malformed-accept") for r in reports)
    data = {"ok": ok, "reports": [r.to_dict() for r in reports]}
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
    lines = [
        f"{r.automaton}: {r.mode} words={r.words} malformed={r.malformed} "
        f"checks={r.checks} failures={len(r.failures)}"
        for r in reports
    ]
    lines.append("PASS" if ok else "FAIL")
    _emit(args, data, "\n".join(lines))
    return 0 if ok else 1


def _parse_range(text):
    try:
        lo, hi = (int(v) for v in text.split(".."))
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected A..B") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"bad range {text!r}")
    return lo, hi


def cmd_stats(args):
    lo, hi = _parse_range(args.n_range)
    rng = random.Random(args.seed)
    rows = []
    if args.mode == "cg1":
        constant = cg1.structural_constant()
        degree = cg1.growing_field_count()
        for n in range(lo, hi + 1):
            row = {"n": n, "structural_bound": cg1.structural_bound(n),
                   "c_n7": constant * n**7, "degree": degree}
            if n <= args.reachable_upto:
                machine = cg1.build_cg1(random_1nfa(n, rng=rng))
                _, row["reachable"] = cg1.compile_explicit(machine, args.cap)
            rows.append(row)
        data = {"mode": "cg1", "structural_constant": constant, "degree": degree, "rows": rows}
    else:
        for n in range(lo, hi + 1):
            machine = cg2.build_cg2(random_2nfa(n, rng=rng))
            words = None
            if machine.n <= 3 and n <= args.reachable_upto:
                spec = annotation_spec("cg2", machine.nfa)
                words = [annotate(spec, w) for w in words_upto(machine.nfa.alphabet, args.words_upto)]
            report = cg2.state_space_report(machine, words, args.cap)
            rows.append(report)
        data = {"mode": "cg2", "degree": cg2.SIZE_MODEL.degree(), "rows": rows}
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
    text = "\n".join(
        " ".join(f"{k}={v}" for k, v in row.items() if k != "per_field_cardinalities")
        for row in rows
    )
    _emit(args, data, text)
    return 0


# -- parser ----------------------------------------------------------------


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=argparse.SUPPRESS,
                        help=f"configuration cap (default {DEFAULT_CAP})")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    return common


GLOBAL_DEFAULTS = {"cap": DEFAULT_CAP, "json": False, "jobs": 1, "seed": 0}


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="twowaycg", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracle", parents=[common], help="exact membership")
    p.add_argument("--automaton", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("tables", parents=[common], help="frontier sets and left tables")
    p.add_argument("--automaton", required=True)
    p.add_argument("--prefix", default="")
    p.add_argument("--op", choices=("ltable", "qx", "sstar", "t"), required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--symbol", default=RIGHT_END, help="symbol read after the prefix")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("convert", parents=[common], help="build the explicit machine")
    p.add_argument("--automaton", required=True)
    p.add_argument("--mode", choices=("cg1", "cg2"))
    p.add_argument("--emit", choices=("explicit",), default="explicit")
    p.add_argument("--max-len", type=int, help="cg2: cover annotated inputs up to this length")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("simulate", parents=[common], help="run a machine on one input")
    p.add_argument("--machine", required=True)
    p.add_argument("--word", required=True, help="word, or a file path with --annot file")
    p.add_argument("--annot", choices=("auto", "file", "none"), default="none")
    p.add_argument("--mode", choices=("cg1", "cg2"),
                   help="treat --machine as a source automaton and run the construction")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="property sweeps")
    p.add_argument("--mode", choices=("cg1", "cg2", "tables", "fragments", "clock"), required=True)
    p.add_argument("--automaton")
    p.add_argument("--random", type=int, default=0, help="number of random automata")
    p.add_argument("--n", type=int, default=2, help="states of random automata")
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--samples", type=int, default=4, help="random malformed tracks per word")
    p.add_argument("--long-words", type=int, default=0,
                   help="extra random words long enough to complete blocks")
    p.add_argument("--mutate", action="store_true", help="disable the annotation check")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", parents=[common], help="state counts")
    p.add_argument("--mode", choices=("cg1", "cg2"), required=True)
    p.add_argument("--n-range", required=True)
    p.add_argument("--reachable-upto", type=int, default=4)
    p.add_argument("--words-upto", type=int, default=2)
    p.add_argument("--report")
    p.set_defaults(func=cmd_stats)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    if args.command == "verify" and not args.automaton and not args.random:
        print("verify: give --automaton or --random K", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"{args.command}: {exc} (raise --cap)", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
