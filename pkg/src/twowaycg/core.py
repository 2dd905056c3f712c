"""Automaton data model and the line-oriented text format.

States are dense integers ``0 .. n-1``.  Two-way machines read a tape
``< w >`` where ``<`` and ``>`` are the reserved endmarker tokens; they are
never members of the input alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

LEFT_END = "<"
RIGHT_END = ">"
ENDMARKERS = (LEFT_END, RIGHT_END)

LEFT = -1
RIGHT = 1
_DIR_TOKEN = {LEFT: "L", RIGHT: "R"}
_TOKEN_DIR = {"L": LEFT, "R": RIGHT}


class FormatError(ValueError):
    """Raised for malformed automaton or encoding text."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _freeze_delta(delta):
    frozen = {}
    for key, targets in delta.items():
        targets = frozenset(targets)
        if targets:
            frozen[key] = targets
    return frozen


@dataclass(frozen=True)
class OneWayNfa:
    """One-way NFA with a single start state and a single accepting state."""

    n: int
    alphabet: tuple
    delta: Mapping = field(default_factory=dict)
    start: int = 0
    accept: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "delta", _freeze_delta(self.delta))

    def targets(self, state, symbol):
        return self.delta.get((state, symbol), frozenset())

    def step_set(self, states, symbol):
        out = set()
        for p in states:
            out |= self.targets(p, symbol)
        return frozenset(out)


@dataclass(frozen=True)
class TwoWayNfa:
    """Two-way NFA over ``< w >``.

    ``delta`` maps ``(state, symbol)`` to a set of ``(state, move)`` pairs
    with ``move`` in ``{LEFT, RIGHT}``.  A run accepts when it is in
    ``accept`` with the head on the right endmarker; ``reject`` is the
    symmetric optional verdict.
    """

    n: int
    alphabet: tuple
    delta: Mapping = field(default_factory=dict)
    start: int = 0
    accept: int = 0
    reject: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "delta", _freeze_delta(self.delta))

    def targets(self, state, symbol):
        return self.delta.get((state, symbol), frozenset())

    @property
    def tape_symbols(self):
        return (LEFT_END,) + self.alphabet + (RIGHT_END,)


Automaton = Union[OneWayNfa, TwoWayNfa]


def validate(automaton: Automaton) -> list[str]:
    """Return the list of invariant violations (empty when well formed)."""
    problems = []
    n = automaton.n
    if n < 1:
        problems.append("state count must be positive")
    if not automaton.alphabet:
        problems.append("alphabet nonempty")
    if len(set(automaton.alphabet)) != len(automaton.alphabet):
        problems.append("duplicate alphabet symbol")
    for sym in automaton.alphabet:
        if sym in ENDMARKERS:
            problems.append(f"endmarker {sym!r} in alphabet")
    if not 0 <= automaton.start < n:
        problems.append("start out of range")
    if not 0 <= automaton.accept < n:
        problems.append("accept out of range")
    two_way = isinstance(automaton, TwoWayNfa)
    if two_way and automaton.reject is not None:
        if not 0 <= automaton.reject < n:
            problems.append("reject out of range")
        if automaton.reject == automaton.accept:
            problems.append("accept equals reject")
    symbols = set(automaton.alphabet)
    if two_way:
        symbols |= set(ENDMARKERS)
    for (p, sym), targets in automaton.delta.items():
        if not 0 <= p < n:
            problems.append("source out of range")
        if sym not in symbols:
            problems.append(f"unknown symbol {sym!r}")
        for t in targets:
            q = t[0] if two_way else t
            if not 0 <= q < n:
                problems.append("target out of range")
            if two_way and t[1] not in (LEFT, RIGHT):
                problems.append("bad direction")
    # one finding per kind is enough for a caller
    return list(dict.fromkeys(problems))


def normalize_accepting(n, alphabet, delta, start, accepting):
    """Build a single-accept :class:`OneWayNfa` from a multi-accept one.

    A fresh state ``n`` is added and every transition into an accepting state
    is duplicated into it.  An accepting start state (empty word in the
    language) has no single-accept equivalent and raises ``ValueError``.
    """
    accepting = set(accepting)
    if start in accepting:
        raise ValueError("empty word accepted; single-accept form cannot express it")
    fresh = n
    new = {key: set(v) for key, v in delta.items()}
    for (p, sym), targets in delta.items():
        if accepting & set(targets):
            new.setdefault((p, sym), set()).add(fresh)
    return OneWayNfa(n + 1, alphabet, new, start, fresh)


def symbol_order(automaton):
    """Tape symbols in canonical order: ``<``, alphabet order, ``>``."""
    if isinstance(automaton, TwoWayNfa):
        return automaton.tape_symbols
    return automaton.alphabet


def serialize(automaton: Automaton) -> str:
    two_way = isinstance(automaton, TwoWayNfa)
    lines = [
        f"type {'2nfa' if two_way else '1nfa'}",
        f"states {automaton.n}",
        f"start {automaton.start}",
        f"accept {automaton.accept}",
    ]
    if two_way and automaton.reject is not None:
        lines.append(f"reject {automaton.reject}")
    lines.append("alphabet " + " ".join(automaton.alphabet))
    rank = {sym: i for i, sym in enumerate(symbol_order(automaton))}
    for p, sym in sorted(automaton.delta, key=lambda k: (k[0], rank[k[1]])):
        targets = automaton.delta[(p, sym)]
        if two_way:
            for q, d in sorted(targets):
                lines.append(f"trans {p} {sym} {q} {_DIR_TOKEN[d]}")
        else:
            for q in sorted(targets):
                lines.append(f"trans {p} {sym} {q}")
    return "\n".join(lines) + "\n"


_HEADER_KEYS = ("type", "states", "start", "accept", "reject", "alphabet")


def _int(token, lineno):
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected integer, got {token!r}", lineno) from None


def parse(text: str) -> Automaton:
    """Parse the canonical text format; see :func:`serialize`."""
    header = {}
    trans = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()
        if key in _HEADER_KEYS:
            if key in header:
                raise FormatError(f"duplicate header key {key!r}", lineno)
            if key != "alphabet" and len(args) != 1:
                raise FormatError(f"{key} takes one value", lineno)
            header[key] = (args, lineno)
        elif key == "trans":
            trans.append((args, lineno))
        else:
            raise FormatError(f"unknown directive {key!r}", lineno)

    for key in ("type", "states", "start", "accept", "alphabet"):
        if key not in header:
            raise FormatError(f"missing header key {key!r}")
    kind = header["type"][0][0]
    if kind not in ("1nfa", "2nfa"):
        raise FormatError(f"unknown type {kind!r}", header["type"][1])
    two_way = kind == "2nfa"
    n = _int(header["states"][0][0], header["states"][1])
    start = _int(header["start"][0][0], header["start"][1])
    accept = _int(header["accept"][0][0], header["accept"][1])
    reject = None
    if "reject" in header:
        if not two_way:
            raise FormatError("reject not allowed for 1nfa", header["reject"][1])
        reject = _int(header["reject"][0][0], header["reject"][1])
    alphabet, alpha_line = header["alphabet"]
    if not alphabet:
        raise FormatError("alphabet nonempty", alpha_line)
    if len(set(alphabet)) != len(alphabet):
        raise FormatError("duplicate alphabet symbol", alpha_line)
    for sym in alphabet:
        if sym in ENDMARKERS:
            raise FormatError(f"endmarker {sym!r} in alphabet", alpha_line)
    allowed = set(alphabet) | (set(ENDMARKERS) if two_way else set())

    delta: dict = {}
    for args, lineno in trans:
        if two_way:
            if len(args) != 4:
                raise FormatError("2nfa transition needs: p sym q L|R", lineno)
        elif len(args) == 4:
            raise FormatError("direction not allowed for 1nfa", lineno)
        elif len(args) != 3:
            raise FormatError("1nfa transition needs: p sym q", lineno)
        p, sym, q = _int(args[0], lineno), args[1], _int(args[2], lineno)
        if sym not in allowed:
            raise FormatError(f"unknown symbol {sym!r}", lineno)
        if not (0 <= p < n and 0 <= q < n):
            raise FormatError("state out of range", lineno)
        if two_way:
            if args[3] not in _TOKEN_DIR:
                raise FormatError(f"bad direction {args[3]!r}", lineno)
            delta.setdefault((p, sym), set()).add((q, _TOKEN_DIR[args[3]]))
        else:
            delta.setdefault((p, sym), set()).add(q)

    if two_way:
        return TwoWayNfa(n, alphabet, delta, start, accept, reject)
    return OneWayNfa(n, alphabet, delta, start, accept)


def load(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(automaton: Automaton, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(automaton))


# -- annotated words -------------------------------------------------------

def annotated_token(symbol) -> str:
    sym, bit = symbol
    return f"{sym}/{bit}"


def parse_annotated_token(token: str):
    sym, sep, bit = token.rpartition("/")
    if not sep or bit not in ("0", "1") or not sym:
        raise FormatError(f"bad annotated symbol {token!r}")
    return (sym, int(bit))


def project_input(x: Iterable) -> tuple:
    """First projection: the input track."""
    return tuple(sym for sym, _ in x)


def project_bits(x: Iterable) -> tuple:
    """Second projection: the annotation track."""
    return tuple(bit for _, bit in x)


def format_annotated(x) -> str:
    return " ".join(annotated_token(s) for s in x)


def parse_annotated(text: str) -> tuple:
    return tuple(parse_annotated_token(t) for t in text.split())


def annotated_alphabet(alphabet) -> tuple:
    return tuple((s, b) for s in alphabet for b in (0, 1))


def word_from_text(text: str, alphabet) -> tuple:
    """Split a word: whitespace-separated tokens, or characters when every
    alphabet symbol is a single character and no whitespace is present."""
    if not text.strip():
        return ()
    if any(ch.isspace() for ch in text.strip()):
        word = tuple(text.split())
    elif all(len(s) == 1 for s in alphabet):
        word = tuple(text.strip())
    else:
        word = (text.strip(),)
    unknown = [s for s in word if s not in alphabet]
    if unknown:
        raise FormatError(f"unknown symbol {unknown[0]!r}")
    return word


# Reference fixtures used across tests and demos.

def fixture_a1() -> OneWayNfa:
    """Two states over {a, b}; accepts the words ending in ``a``."""
    return OneWayNfa(2, ("a", "b"), {(0, "a"): {0, 1}, (0, "b"): {0}}, 0, 1)


def fixture_a2() -> TwoWayNfa:
    """Two states over {a}: sweep right in state 0, then left in state 1."""
    return TwoWayNfa(
        2,
        ("a",),
        {
            (0, LEFT_END): {(0, RIGHT)},
            (0, "a"): {(0, RIGHT)},
            (0, RIGHT_END): {(1, LEFT)},
            (1, "a"): {(1, LEFT)},
        },
        0,
        1,
    )
