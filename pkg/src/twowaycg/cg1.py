"""Self-verifying two-way machine for a one-way NFA, by inductive counting.

The machine reads ``< x >`` with ``x`` over ``alphabet x {0, 1}`` and keeps
``m``, the size of the frontier set of the prefix read so far.  For every
cell it recounts the frontier set of the longer prefix, enumerating the old
one in ascending order with repeated local simulations; each local
simulation picks its start state from the last complete annotation block, so
the head never strays more than ``2n`` cells left of the current cell.

Head bookkeeping: ``glob`` is the head position modulo ``n``.
"""

from __future__ import annotations

from typing import NamedTuple

from .core import LEFT, LEFT_END, RIGHT, RIGHT_END, OneWayNfa, annotated_alphabet
from .engine import (
    DEFAULT_CAP,
    Abort,
    Call,
    Go,
    Halt,
    ProcedureMachine,
    Ret,
    Verdict,
    unfold,
)
from .sizes import SizeModel, prefixes


class Main(NamedTuple):
    phase: str  # loop | counted | checked | tailed | verdict
    m: int | None


class CountNext(NamedTuple):
    stage: str  # loop | await | test
    p: int
    m_next: int
    i: int
    m: int
    q_prev: int | None


class NextQx(NamedTuple):
    stage: str  # start | call | await | check | done
    shift: int
    q_prev: int
    r: int | None = None


class Nsimul(NamedTuple):
    stage: str  # scan | walk | read
    cur: int
    dist: int
    lag: int  # 1 when the anchor's own block is not yet verified


class CheckAnnot(NamedTuple):
    stage: str  # count | back | enum | await | goto | return
    m: int
    i: int
    k: int
    ones: int
    q_prev: int | None


class TailCheck(NamedTuple):
    stage: str  # left | back
    k: int


class Member(NamedTuple):
    stage: str  # loop | await | test
    i: int
    m: int
    q_prev: int | None


# Domain sizes as functions of n, for the structural state count.  A frame
# on top of the stack is active; frames below it wait for a return and carry
# fewer live fields (the slot that receives the result is empty).
ACTIVE_DOMAINS = {
    Main: {"phase": lambda n: 5, "m": lambda n: n + 1},
    CountNext: {
        "stage": lambda n: 2,
        "p": lambda n: n + 1,
        "m_next": lambda n: n + 1,
        "i": lambda n: n + 1,
        "m": lambda n: n + 1,
        "q_prev": lambda n: n + 1,
    },
    NextQx: {
        "stage": lambda n: 4,
        "shift": lambda n: 2,
        "q_prev": lambda n: n + 1,
        "r": lambda n: n + 1,
    },
    Nsimul: {
        "stage": lambda n: 3,
        "cur": lambda n: n + 1,
        "dist": lambda n: 2 * n,
        "lag": lambda n: 2,
    },
    CheckAnnot: {
        "stage": lambda n: 5,
        "m": lambda n: n + 1,
        "i": lambda n: n + 1,
        "k": lambda n: n,
        "ones": lambda n: n + 1,
        "q_prev": lambda n: n + 1,
    },
    TailCheck: {"stage": lambda n: 2, "k": lambda n: n},
    Member: {
        "stage": lambda n: 2,
        "i": lambda n: n + 1,
        "m": lambda n: n + 1,
        "q_prev": lambda n: n + 1,
    },
}

# Keyed by (caller, callee): what the caller still holds while it waits.
WAITING_DOMAINS = {
    (Main, CountNext): {"phase": lambda n: 1},
    (Main, CheckAnnot): {"phase": lambda n: 1},
    (Main, TailCheck): {"phase": lambda n: 1, "m": lambda n: n + 1},
    (Main, Member): {"phase": lambda n: 1},
    (CountNext, NextQx): {
        "p": lambda n: n,
        "m_next": lambda n: n + 1,
        "i": lambda n: n + 1,
        "m": lambda n: n + 1,
    },
    (CheckAnnot, NextQx): {"m": lambda n: n + 1, "i": lambda n: n + 1},
    (Member, NextQx): {"i": lambda n: n + 1, "m": lambda n: n + 1},
    (NextQx, Nsimul): {"shift": lambda n: 2, "q_prev": lambda n: n + 1},
}

STACK_SHAPES = prefixes(
    (Main, CountNext, NextQx, Nsimul),
    (Main, CheckAnnot, NextQx, Nsimul),
    (Main, TailCheck),
    (Main, Member, NextQx, Nsimul),
)

SIZE_MODEL = SizeModel(STACK_SHAPES, ACTIVE_DOMAINS, WAITING_DOMAINS, head=lambda n: n)


# Endmarkers read as blank cells; no reachable configuration relies on this,
# but the explicit compiler probes every symbol in every state.
def _sym(symbol):
    return symbol[0] if isinstance(symbol, tuple) else None


def _bit(symbol):
    return symbol[1] if isinstance(symbol, tuple) else 0


class Cg1Machine(ProcedureMachine):
    """Two-way machine over annotated words for the one-way NFA ``source``.

    With a well-annotated input it accepts iff the input track is in the
    source language and rejects otherwise; any other input has neither an
    accepting nor a rejecting run.  ``check_annotation=False`` disables the
    per-block annotation check (for mutation testing only).
    """

    def __init__(self, source: OneWayNfa, check_annotation=True):
        self.source = source
        self.n = source.n
        self.check_annotation = check_annotation

    def entry(self, word):
        return Main("loop", 1), 1, 1 % self.n

    def move_glob(self, glob, move):
        return (glob + move) % self.n

    def resume(self, cont, value):
        kind = type(cont)
        if kind is Main:
            if cont.phase == "verdict":
                return cont._replace(m=value)
            return cont._replace(m=value) if cont.m is None else cont
        if kind is CountNext:
            return cont._replace(stage="test", i=cont.i + 1, q_prev=value)
        if kind is NextQx:
            return cont._replace(stage="check", r=value)
        if kind is CheckAnnot:
            return cont._replace(stage="goto", i=cont.i + 1, k=0, q_prev=value)
        if kind is Member:
            return cont._replace(stage="test", i=cont.i + 1, q_prev=value)
        raise TypeError(kind)

    def actions(self, frame, symbol, glob):
        return _HANDLERS[type(frame)](self, frame, symbol, glob)

    # -- driver

    def _main(self, f, symbol, glob):
        if f.phase == "loop":
            if symbol == RIGHT_END:
                return [Call(TailCheck("left", 0), Main("tailed", f.m))]
            return [Call(CountNext("loop", 0, 0, 0, f.m, -1), Main("counted", None))]
        if f.phase == "counted":
            if self.check_annotation and glob == 0:
                return [Call(CheckAnnot("count", f.m, 0, 0, 0, -1), Main("checked", None))]
            return [Go(Main("loop", f.m), RIGHT)]
        if f.phase == "checked":
            return [Go(Main("loop", f.m), RIGHT)]
        if f.phase == "tailed":
            return [Call(Member("loop", 0, f.m, -1), Main("verdict", None))]
        if symbol != RIGHT_END:
            return [Abort("halt off the endmarker")]
        return [Halt(Verdict.ACCEPTING if f.m else Verdict.REJECTING)]

    # -- counting the next frontier set

    def _count_next(self, f, symbol, glob):
        if f.stage == "loop":
            if f.p == self.n:
                return [Ret(f.m_next)]
            if f.i == f.m:
                return [Go(f._replace(p=f.p + 1, i=0, q_prev=-1))]
            return [Call(NextQx("start", 1, f.q_prev), f._replace(stage="await", q_prev=None))]
        # stage "test": q_prev holds the state just enumerated
        if f.p in self.source.targets(f.q_prev, _sym(symbol)):
            return [Go(CountNext("loop", f.p + 1, f.m_next + 1, 0, f.m, -1))]
        return [Go(f._replace(stage="loop"))]

    def _next_qx(self, f, symbol, glob):
        if f.stage == "start":
            return [Go(f._replace(stage="call"), -f.shift)]
        if f.stage == "call":
            return [Call(Nsimul("scan", -1, 0, 1 - f.shift), f._replace(stage="await"))]
        if f.stage == "check":
            if f.r <= f.q_prev:
                return [Abort("order")]
            return [Go(f._replace(stage="done"), f.shift)]
        return [Ret(f.r)]

    def _nsimul(self, f, symbol, glob):
        n = self.n
        # distance from the anchor back to the end of the block to read
        anchor_offset = (glob + f.dist - f.lag) % n + f.lag
        if f.stage == "scan":
            if symbol == LEFT_END:
                return [Go(f._replace(stage="walk", cur=self.source.start))]
            acts = []
            in_block = anchor_offset <= f.dist <= anchor_offset + n - 1
            if in_block and _bit(symbol) == 1:
                acts.append(Go(f._replace(stage="walk", cur=(glob - 1) % n)))
            if f.dist < anchor_offset + n - 1:
                acts.append(Go(f._replace(dist=f.dist + 1), LEFT))
            elif not acts:
                acts.append(Abort("no block state"))
            return acts
        if f.stage == "walk":
            if f.dist > anchor_offset:
                return [Go(f._replace(dist=f.dist - 1), RIGHT)]
            if f.dist == 0:
                return [Ret(f.cur)]
            return [Go(f._replace(stage="read", dist=f.dist - 1), RIGHT)]
        targets = self.source.targets(f.cur, _sym(symbol))
        if not targets:
            return [Abort("dead end")]
        if f.dist == 0:
            return [Ret(r) for r in sorted(targets)]
        return [Go(f._replace(cur=r, dist=f.dist - 1), RIGHT) for r in sorted(targets)]

    # -- annotation checks

    def _check_annot(self, f, symbol, glob):
        n = self.n
        if f.stage == "count":
            ones = f.ones + _bit(symbol)
            if f.k < n - 1:
                return [Go(f._replace(k=f.k + 1, ones=ones), LEFT)]
            if ones != f.m:
                return [Abort("block count")]
            return [Go(f._replace(stage="back", ones=0))]
        if f.stage == "back":
            if f.k > 0:
                return [Go(f._replace(k=f.k - 1), RIGHT)]
            return [Go(f._replace(stage="enum"))]
        if f.stage == "enum":
            if f.i == f.m:
                return [Ret(f.m)]
            return [Call(NextQx("start", 0, f.q_prev), f._replace(stage="await", q_prev=None))]
        if f.stage == "goto":
            if f.k < n - 1 - f.q_prev:
                return [Go(f._replace(k=f.k + 1), LEFT)]
            if _bit(symbol) != 1:
                return [Abort("block bit")]
            return [Go(f._replace(stage="return"))]
        # stage "return"
        if f.k > 0:
            return [Go(f._replace(k=f.k - 1), RIGHT)]
        return [Go(f._replace(stage="enum"))]

    def _tail_check(self, f, symbol, glob):
        if f.stage == "left":
            if f.k > 0 and _bit(symbol) != 0:
                return [Abort("tail bit")]
            tail = (glob + f.k - 1) % self.n
            if f.k < tail:
                return [Go(f._replace(k=f.k + 1), LEFT)]
            return [Go(f._replace(stage="back"))]
        if f.k > 0:
            return [Go(f._replace(k=f.k - 1), RIGHT)]
        return [Ret(None)]

    def _member(self, f, symbol, glob):
        if f.stage == "loop":
            if f.i == f.m:
                return [Ret(False)]
            return [Call(NextQx("start", 1, f.q_prev), f._replace(stage="await", q_prev=None))]
        if f.q_prev == self.source.accept:
            return [Ret(True)]
        return [Go(f._replace(stage="loop"))]


_HANDLERS = {
    Main: Cg1Machine._main,
    CountNext: Cg1Machine._count_next,
    NextQx: Cg1Machine._next_qx,
    Nsimul: Cg1Machine._nsimul,
    CheckAnnot: Cg1Machine._check_annot,
    TailCheck: Cg1Machine._tail_check,
    Member: Cg1Machine._member,
}


def build_cg1(source: OneWayNfa, check_annotation=True) -> Cg1Machine:
    return Cg1Machine(source, check_annotation)


# -- state accounting ------------------------------------------------------


def field_cardinalities(n) -> dict:
    return SIZE_MODEL.cardinalities(n)


def structural_bound(n) -> int:
    """Upper bound on the number of (stack, head-mod-n) valuations."""
    return SIZE_MODEL.bound(n)


def growing_field_count() -> int:
    """Degree in n of :func:`structural_bound`."""
    return round(SIZE_MODEL.degree())


def structural_constant() -> float:
    """Leading coefficient of :func:`structural_bound` as a polynomial in n."""
    big = 10**6
    return structural_bound(big) / big ** growing_field_count()


# -- explicit compilation --------------------------------------------------


def compile_explicit(machine: Cg1Machine, cap=DEFAULT_CAP):
    """Unfold into a plain :class:`TwoWayNfa` over ``sym/bit`` tokens.

    Returns ``(explicit, reachable_vm_states)``.
    """
    return unfold(machine, annotated_alphabet(machine.source.alphabet), cap)
