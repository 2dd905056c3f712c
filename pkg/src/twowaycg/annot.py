"""The certified annotation track.

The annotation of ``w`` splits ``w`` into blocks of ``block_size`` cells.
Every complete block carries the encoding of the frontier set (one-way
source) or of the left table (two-way source) of the prefix ending with that
block; the trailing partial block is all zeros.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import OneWayNfa, TwoWayNfa, project_input
from .tables import (
    NormalizedTwoWayNfa,
    encode_rel,
    encode_set,
    ltable,
    normalize_restart,
    qx_1nfa,
    update_ltable,
)


class Mode(enum.Enum):
    CG1 = "cg1"
    CG2 = "cg2"


@dataclass(frozen=True)
class AnnotationSpec:
    mode: Mode
    automaton: object  # OneWayNfa for CG1, NormalizedTwoWayNfa for CG2

    @property
    def n(self):
        return self.automaton.n

    @property
    def block_size(self):
        return self.n if self.mode is Mode.CG1 else self.n * self.n

    @classmethod
    def for_1nfa(cls, nfa: OneWayNfa):
        return cls(Mode.CG1, nfa)

    @classmethod
    def for_2nfa(cls, nfa):
        if isinstance(nfa, TwoWayNfa):
            nfa = normalize_restart(nfa)
        if not isinstance(nfa, NormalizedTwoWayNfa):
            raise TypeError("expected a two-way NFA")
        return cls(Mode.CG2, nfa)


def annotation_bits(spec: AnnotationSpec, word) -> str:
    word = tuple(word)
    size = spec.block_size
    full, rest = divmod(len(word), size)
    parts = []
    if spec.mode is Mode.CG1:
        for k in range(1, full + 1):
            parts.append(encode_set(qx_1nfa(spec.automaton, word[: k * size]), spec.n))
    else:
        nfa = spec.automaton.inner
        table = ltable(nfa, ())
        for pos, sym in enumerate(word[: full * size], start=1):
            table = update_ltable(table, sym, nfa)
            if pos % size == 0:
                parts.append(encode_rel(table, spec.n))
    parts.append("0" * rest)
    return "".join(parts)


def annotate(spec: AnnotationSpec, word) -> tuple:
    """The annotated word: pairs ``(symbol, bit)``."""
    word = tuple(word)
    bits = annotation_bits(spec, word)
    return tuple((sym, int(b)) for sym, b in zip(word, bits))


def is_well_annotated(spec: AnnotationSpec, x) -> bool:
    x = tuple(x)
    return x == annotate(spec, project_input(x))
