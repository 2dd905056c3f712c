"""Left tables of two-way NFAs and the relation algebra that updates them.

A left table of a prefix ``u`` is the set of pairs ``(p, q)`` such that a
run started in ``p`` on the last cell of ``< u`` first leaves the prefix to
the right in state ``q``.  Relations are frozensets of state pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import LEFT, LEFT_END, RIGHT, RIGHT_END, FormatError, OneWayNfa, TwoWayNfa
from .engine import DEFAULT_CAP, bounded_search

# -- frontier sets ---------------------------------------------------------


def qx_1nfa(nfa: OneWayNfa, word) -> frozenset:
    states = frozenset({nfa.start})
    for sym in word:
        states = nfa.step_set(states, sym)
    return states


def qx_2nfa(nfa: TwoWayNfa, word, cap=DEFAULT_CAP) -> frozenset:
    """States in which the right endmarker is first entered on ``word``."""
    word = tuple(word)
    return frozenset(bounded_search(nfa, word, {(nfa.start, 1)}, len(word), cap))


def ltable(nfa: TwoWayNfa, word, cap=DEFAULT_CAP) -> frozenset:
    word = tuple(word)
    pos = len(word)
    return frozenset(
        (p, q)
        for p in range(nfa.n)
        for q in bounded_search(nfa, word, {(p, pos)}, pos, cap)
    )


# -- restart normalisation and table override ------------------------------


@dataclass(frozen=True)
class NormalizedTwoWayNfa:
    inner: TwoWayNfa
    restart: int

    @property
    def n(self):
        return self.inner.n


def normalize_restart(nfa: TwoWayNfa) -> NormalizedTwoWayNfa:
    """Add an unreachable state that walks left and restarts the run.

    Its left-table row equals the frontier set, and no table pair ends in it.
    """
    restart = nfa.n
    delta = {key: set(v) for key, v in nfa.delta.items()}
    for sym in nfa.alphabet + (RIGHT_END,):
        delta[(restart, sym)] = {(restart, LEFT)}
    delta[(restart, LEFT_END)] = {(nfa.start, RIGHT)}
    inner = TwoWayNfa(nfa.n + 1, nfa.alphabet, delta, nfa.start, nfa.accept, nfa.reject)
    return NormalizedTwoWayNfa(inner, restart)


def with_left_table(nfa: TwoWayNfa, relation) -> TwoWayNfa:
    """Replace the left-endmarker transitions: ``p -> (q, R)`` iff ``(p, q)`` in relation."""
    delta = {key: v for key, v in nfa.delta.items() if key[1] != LEFT_END}
    for p, q in relation:
        delta.setdefault((p, LEFT_END), set())
        delta[(p, LEFT_END)] = set(delta[(p, LEFT_END)]) | {(q, RIGHT)}
    return TwoWayNfa(nfa.n, nfa.alphabet, delta, nfa.start, nfa.accept, nfa.reject)


# -- relation algebra ------------------------------------------------------


def identity(n) -> frozenset:
    return frozenset((p, p) for p in range(n))


def compose(first, second) -> frozenset:
    by_source = {}
    for r, q in second:
        by_source.setdefault(r, set()).add(q)
    return frozenset((p, q) for p, r in first for q in by_source.get(r, ()))


def one_revisit(nfa: TwoWayNfa, table, symbol) -> frozenset:
    """Pairs ``(p, q)``: a left move from ``p`` on ``symbol`` then one table pair."""
    out = set()
    for p in range(nfa.n):
        for r, d in nfa.targets(p, symbol):
            if d == LEFT:
                out.update((p, q) for rr, q in table if rr == r)
    return frozenset(out)


def t_relation(nfa: TwoWayNfa, table, symbol, k) -> frozenset:
    """Exactly ``k`` returns to the current cell."""
    step = one_revisit(nfa, table, symbol)
    rel = identity(nfa.n)
    for _ in range(k):
        rel = compose(rel, step)
    return rel


def s_relation(nfa: TwoWayNfa, table, symbol, k) -> frozenset:
    """At most ``k`` returns to the current cell."""
    step = one_revisit(nfa, table, symbol)
    level = identity(nfa.n)
    acc = set(level)
    for _ in range(k):
        level = compose(level, step)
        acc |= level
    return frozenset(acc)


def stabilization_bound(n) -> int:
    return n * (n - 1)


def s_star_relation(nfa: TwoWayNfa, table, symbol) -> frozenset:
    return s_relation(nfa, table, symbol, stabilization_bound(nfa.n))


def t_rel(nfa, word, symbol, k):
    return t_relation(nfa, ltable(nfa, word), symbol, k)


def s_rel(nfa, word, symbol, k):
    return s_relation(nfa, ltable(nfa, word), symbol, k)


def s_star(nfa, word, symbol):
    return s_star_relation(nfa, ltable(nfa, word), symbol)


def update_ltable(prev, symbol, nfa: TwoWayNfa) -> frozenset:
    """Left table of ``u + symbol`` from the left table of ``u`` alone."""
    closure = s_star_relation(nfa, prev, symbol)
    out = set()
    for p, r in closure:
        for q, d in nfa.targets(r, symbol):
            if d == RIGHT:
                out.add((p, q))
    return frozenset(out)


def ltable_by_updates(nfa: TwoWayNfa, word) -> frozenset:
    table = ltable(nfa, ())
    for sym in word:
        table = update_ltable(table, sym, nfa)
    return table


def accepts_via_ltables(machine: NormalizedTwoWayNfa, word) -> bool:
    nfa = machine.inner
    table = ltable_by_updates(nfa, word)
    closure = s_star_relation(nfa, table, RIGHT_END)
    return (machine.restart, nfa.accept) in closure


# -- bit-string encodings --------------------------------------------------


def encode_set(states, n) -> str:
    states = set(states)
    if any(not 0 <= p < n for p in states):
        raise ValueError("state out of range")
    return "".join("1" if p in states else "0" for p in range(n))


def decode_set(bits, n) -> frozenset:
    bits = _bits(bits, n)
    return frozenset(p for p, b in enumerate(bits) if b == "1")


def encode_rel(relation, n) -> str:
    relation = set(relation)
    if any(not (0 <= p < n and 0 <= q < n) for p, q in relation):
        raise ValueError("state out of range")
    return "".join(
        "1" if (k // n, k % n) in relation else "0" for k in range(n * n)
    )


def decode_rel(bits, n) -> frozenset:
    bits = _bits(bits, n * n)
    return frozenset((k // n, k % n) for k, b in enumerate(bits) if b == "1")


def _bits(bits, length) -> str:
    if not isinstance(bits, str):
        bits = "".join(str(int(b)) for b in bits)
    if len(bits) != length:
        raise FormatError(f"expected {length} bits, got {len(bits)}")
    if set(bits) - {"0", "1"}:
        raise FormatError("bits must be 0 or 1")
    return bits
