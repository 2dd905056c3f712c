"""Brute-force oracles and the sweep harness for both constructions.

The membership oracles here share nothing with the cg1/cg2 machines: the
one-way oracle is a plain subset simulation and the two-way oracle a
fixpoint over ``(state, position)`` pairs.
"""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .annot import AnnotationSpec, annotate
from .cg1 import build_cg1
from .cg2 import LSeg, NsimulT, build_cg2, enum_s, enum_t, nsimul_s, nsimul_t, window_hp
from .core import (
    LEFT,
    LEFT_END,
    RIGHT,
    RIGHT_END,
    OneWayNfa,
    TwoWayNfa,
    format_annotated,
    project_input,
)
from .engine import DEFAULT_CAP, Exploration, decide
from .tables import (
    accepts_via_ltables,
    decode_rel,
    identity,
    ltable,
    normalize_restart,
    qx_2nfa,
    s_relation,
    stabilization_bound,
    t_relation,
    update_ltable,
    with_left_table,
)

# -- oracles ---------------------------------------------------------------


def oracle_membership(automaton, word) -> bool:
    word = tuple(word)
    if isinstance(automaton, OneWayNfa):
        current = {automaton.start}
        for sym in word:
            current = {q for p in current for q in automaton.delta.get((p, sym), ())}
        return automaton.accept in current
    tape = (LEFT_END,) + word + (RIGHT_END,)
    reached = {(automaton.start, 1)}
    frontier = list(reached)
    while frontier:
        p, pos = frontier.pop()
        for q, d in automaton.delta.get((p, tape[pos]), ()):
            nxt = (q, pos + d)
            if 0 <= nxt[1] < len(tape) and nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    return (automaton.accept, len(tape) - 1) in reached


# -- random automata -------------------------------------------------------


def random_1nfa(n, alphabet=("a", "b"), rng=None) -> OneWayNfa:
    """Each (state, symbol) gets 0 to 2 distinct targets; start 0, accept n-1."""
    rng = rng or random.Random(0)
    delta = {}
    for p in range(n):
        for sym in alphabet:
            delta[(p, sym)] = set(rng.sample(range(n), min(n, rng.randint(0, 2))))
    return OneWayNfa(n, alphabet, delta, 0, n - 1)


def random_2nfa(n, alphabet=("a", "b"), rng=None) -> TwoWayNfa:
    """Each (state, tape symbol) gets 0 to 2 distinct moves, direction uniform."""
    rng = rng or random.Random(0)
    moves = [(q, d) for q in range(n) for d in (LEFT, RIGHT)]
    delta = {}
    for p in range(n):
        for sym in (LEFT_END,) + tuple(alphabet) + (RIGHT_END,):
            delta[(p, sym)] = set(rng.sample(moves, rng.randint(0, 2)))
    return TwoWayNfa(n, alphabet, delta, 0, n - 1)


def words_upto(alphabet, max_len):
    for length in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=length)


# -- reports ---------------------------------------------------------------


@dataclass
class SweepReport:
    automaton: str
    mode: str
    max_len: int
    words: int = 0
    accept_agreements: int = 0
    reject_agreements: int = 0
    malformed: int = 0
    malformed_silent: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def merge(self, other: "SweepReport"):
        for name in ("words", "accept_agreements", "reject_agreements", "malformed",
                     "malformed_silent", "checks"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.failures.extend(other.failures)

    def witnesses(self, kind):
        return [f for f in self.failures if f["kind"] == kind]

    def to_dict(self):
        out = asdict(self)
        out["ok"] = self.ok
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# -- property (D) sweeps ---------------------------------------------------


def build_machine(mode, automaton, mutate=False):
    """The construction for ``mode``; ``mutate`` disables the annotation check."""
    if mode == "cg1":
        return build_cg1(automaton, check_annotation=not mutate)
    return build_cg2(automaton, check_table=not mutate)


def annotation_spec(mode, automaton) -> AnnotationSpec:
    if mode == "cg1":
        return AnnotationSpec.for_1nfa(automaton)
    return AnnotationSpec.for_2nfa(automaton)


def malformed_variants(x, samples, rng, exhaustive_upto=6):
    """Annotation tracks differing from ``x``: every track when short,
    otherwise every single flip plus ``samples`` random tracks."""
    x = tuple(x)
    word = project_input(x)
    if len(x) <= exhaustive_upto:
        tracks = itertools.product((0, 1), repeat=len(x))
    else:
        flips = []
        for i in range(len(x)):
            bits = [b for _, b in x]
            bits[i] ^= 1
            flips.append(tuple(bits))
        randoms = [tuple(rng.randint(0, 1) for _ in x) for _ in range(samples)]
        tracks = flips + randoms
    seen = {tuple(b for _, b in x)}
    for bits in tracks:
        if bits not in seen:
            seen.add(bits)
            yield tuple(zip(word, bits))


def _check_word(task):
    mode, automaton, word, samples, seed, mutate, cap, malformed_only = task
    machine = build_machine(mode, automaton, mutate)
    spec = annotation_spec(mode, automaton)
    rng = random.Random(f"{seed}:{''.join(map(str, word))}")
    report = SweepReport("", mode, len(word))
    x = annotate(spec, word)
    if not malformed_only:
        member = oracle_membership(automaton, word)
        out = decide(machine, x, cap)
        report.words += 1
        if out.conflicting:
            report.failures.append(_failure("conflict", word, x, out))
        if out.accept_path == member:
            report.accept_agreements += 1
        else:
            report.failures.append(_failure("accept-mismatch", word, x, out))
        if out.reject_path == (not member):
            report.reject_agreements += 1
        else:
            report.failures.append(_failure("reject-mismatch", word, x, out))
    for y in malformed_variants(x, samples, rng):
        out = decide(machine, y, cap)
        report.malformed += 1
        if not (out.accept_path or out.reject_path):
            report.malformed_silent += 1
        else:
            kind = "malformed-accept" if out.accept_path else "malformed-reject"
            report.failures.append(_failure(kind, word, y, out))
    return word, report


def _failure(kind, word, x, out):
    return {
        "kind": kind,
        "word": " ".join(word),
        "annotated": format_annotated(x),
        "accept_path": out.accept_path,
        "reject_path": out.reject_path,
    }


def check_property_d(
    mode,
    automaton,
    max_len,
    malformed_samples=4,
    seed=0,
    name="automaton",
    mutate=False,
    long_words=(),
    jobs=1,
    cap=DEFAULT_CAP,
) -> SweepReport:
    """Sweep all words up to ``max_len`` plus malformed variants.

    ``long_words`` are extra inputs whose malformed variants are checked
    too (and the word itself); use them to reach complete blocks.
    """
    words = list(words_upto(automaton.alphabet, max_len))
    tasks = [(mode, automaton, w, malformed_samples, seed, mutate, cap, False) for w in words]
    tasks += [
        (mode, automaton, tuple(w), malformed_samples, seed, mutate, cap, False)
        for w in long_words
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_word, tasks, chunksize=4))
    else:
        results = [_check_word(t) for t in tasks]
    report = SweepReport(name, mode, max_len)
    for _, part in sorted(results, key=lambda r: (len(r[0]), r[0])):
        report.merge(part)
    return report


def random_long_words(alphabet, lengths, count, seed=0):
    rng = random.Random(seed)
    return [tuple(rng.choice(alphabet) for _ in range(rng.choice(lengths))) for _ in range(count)]


# -- left-table identities -------------------------------------------------


def check_tables_suite(automaton: TwoWayNfa, max_prefix=4, max_word=6, name="automaton"):
    """Every left-table identity, checked against the search oracles."""
    report = SweepReport(name, "tables", max_prefix)
    nfa = automaton
    normalized = normalize_restart(nfa)
    inner = normalized.inner
    n2 = inner.n
    bound = stabilization_bound(n2)

    def check(cond, kind, **detail):
        report.checks += 1
        if not cond:
            report.failures.append({"kind": kind, **detail})

    for u in words_upto(nfa.alphabet, max_prefix):
        key = " ".join(u)
        table = ltable(inner, u)
        for sym in nfa.alphabet:
            check(update_ltable(table, sym, inner) == ltable(inner, u + (sym,)),
                  "update", prefix=key, symbol=sym)
        for sym in nfa.alphabet + (RIGHT_END,):
            check(t_relation(inner, table, sym, 0) == identity(n2), "t0", prefix=key, symbol=sym)
            levels = [s_relation(inner, table, sym, k) for k in range(bound + n2 * n2 + 1)]
            for k in range(len(levels) - 1):
                check(levels[k] <= levels[k + 1], "monotone", prefix=key, symbol=sym, k=k)
            for k in range(bound, len(levels)):
                check(levels[k] == levels[bound], "stabilization", prefix=key, symbol=sym, k=k)
        restart = normalized.restart
        row = frozenset(q for p, q in table if p == restart)
        check(row == frozenset(qx_2nfa(nfa, u)), "restart-row", prefix=key)
        check(all(q != restart for _, q in table), "restart-column", prefix=key)
    for w in words_upto(nfa.alphabet, max_word):
        member = decide(nfa, w).accept_path
        check(accepts_via_ltables(normalized, w) == member, "recognition", word=" ".join(w))
        check(oracle_membership(nfa, w) == member, "oracle-agreement", word=" ".join(w))
    return report


# -- cg2 fragment oracles --------------------------------------------------


def window_relation(machine, x, pos):
    """``R`` read off the previous block of the window anchored at ``pos``."""
    N = machine.block
    first = pos - (window_hp(machine, pos) - N) - N  # first cell of the left block
    if first < 1:
        return ltable(machine.nfa, ())
    return decode_rel([b for _, b in x[first - 1 : first - 1 + N]], machine.n)


def fragment_oracle(machine, x, pos):
    """``(nfa_over_R, local_word)``: the overridden machine and the input
    segment from the window's current block up to ``pos``."""
    N = machine.block
    start = pos - (window_hp(machine, pos) - N)
    R = window_relation(machine, x, pos)
    local = project_input(x[start - 1 : pos])
    return with_left_table(machine.nfa, R), local


def check_fragments(automaton: TwoWayNfa, inputs, name="automaton", cap=DEFAULT_CAP):
    """Local simulations and enumerations against the overridden-table oracle."""
    machine = build_cg2(automaton)
    n = machine.n
    report = SweepReport(name, "fragments", max((len(x) for x in inputs), default=0))

    def check(cond, kind, **detail):
        report.checks += 1
        if not cond:
            report.failures.append({"kind": kind, **detail})

    for x in inputs:
        x = tuple(x)
        for pos in range(1, len(x) + 1):
            over, local = fragment_oracle(machine, x, pos)
            tau = ltable(over, local)
            where = {"input": format_annotated(x), "pos": pos}
            for p in range(n):
                got = nsimul_t(machine, x, pos, p, cap)
                check(got == frozenset(q for a, q in tau if a == p), "nsimul_t", p=p, **where)
            check(enum_t(machine, x, pos, len(tau), cap) == [tuple(sorted(tau))], "enum_t", **where)
            check(enum_t(machine, x, pos, len(tau) + 1, cap) == [], "enum_t-over", **where)
        for pos in range(1, len(x) + 2):
            over, local = fragment_oracle(machine, x, pos)
            sym = local[-1] if pos <= len(x) else RIGHT_END
            prefix = local[:-1] if pos <= len(x) else local
            tau = ltable(over, prefix)
            where = {"input": format_annotated(x), "pos": pos}
            for j in sorted({0, 1, 2, machine.block}):
                rel = s_relation(over, tau, sym, j)
                for p in range(n):
                    got = nsimul_s(machine, x, pos, p, j, cap)
                    check(got == frozenset(q for a, q in rel if a == p), "nsimul_s", p=p, j=j, **where)
                runs = enum_s(machine, x, pos, len(rel), j, cap)
                check(runs == [tuple(sorted(rel))], "enum_s", j=j, **where)
                check(enum_s(machine, x, pos, len(rel) + 1, j, cap) == [], "enum_s-over", j=j, **where)
    return report


def check_clock(automaton: TwoWayNfa, inputs, name="automaton", cap=DEFAULT_CAP):
    """The step budget of the local simulation never cuts a loop-free path.

    For every anchor and start state the clocked and unclocked simulations
    return the same end states, and no clocked run exceeds the budget.
    """
    clocked = build_cg2(automaton)
    free = build_cg2(automaton, clocked=False)
    report = SweepReport(name, "clock", max((len(x) for x in inputs), default=0))
    limit = clocked.clock_limit
    longest = 0
    for x in inputs:
        x = tuple(x)
        for pos in range(1, len(x) + 1):
            for p in range(clocked.n):
                a = nsimul_t(clocked, x, pos, p, cap)
                b = nsimul_t(free, x, pos, p, cap)
                report.checks += 1
                if a != b:
                    report.failures.append({
                        "kind": "clock-binding", "input": format_annotated(x), "pos": pos, "p": p,
                    })
                steps = _max_clock(clocked, x, pos, p, cap)
                longest = max(longest, steps)
                report.checks += 1
                if steps > limit:
                    report.failures.append({"kind": "clock-overrun", "pos": pos, "p": p})
    report.max_len = longest
    return report


def _max_clock(machine, x, pos, p, cap):
    search = Exploration(machine, x, cap, keep_nodes=True)
    search.summary(NsimulT("call", p), pos, window_hp(machine, pos))
    return max(
        (frame.clock for nodes in search.nodes.values() for frame, _, _ in nodes
         if isinstance(frame, LSeg)),
        default=0,
    )
