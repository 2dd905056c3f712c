"""Self-verifying two-way machine for a two-way NFA, via left tables.

The source is first restart-normalised (``n`` below is the normalised state
count and ``N = n * n`` the block size).  The machine keeps ``m``, the size
of the left table of the prefix to the left of the head, and updates it cell
by cell through three counting rounds: the one-revisit closure ``S^1``, its
doubling up to ``S*``, and the new table.  Every membership question is
answered by enumerating a relation of known size in ascending order, each
pair witnessed by a local simulation that reads the left table of the
previous block from the annotation track.

Head bookkeeping: ``glob`` is the window offset ``hp`` in ``[0, 2N)``.  It is
``N`` on the first input cell, follows the head, may not drop below 0, and
wraps from ``2N - 1`` to ``N`` on a right move.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .core import LEFT, LEFT_END, RIGHT, RIGHT_END, TwoWayNfa
from .engine import (
    DEFAULT_CAP,
    Abort,
    Call,
    Go,
    Halt,
    ProcedureMachine,
    Ret,
    Verdict,
    call_fragment,
    reachable_configs,
)
from .sizes import SizeModel, prefixes
from .tables import NormalizedTwoWayNfa, ltable, normalize_restart


def _sym(symbol):
    return symbol[0] if isinstance(symbol, tuple) else symbol


def _bit(symbol):
    return symbol[1] if isinstance(symbol, tuple) else 0


class LSeg(NamedTuple):
    """Local simulation of a left segment; returns the exit state without
    performing the final right move out of cell ``top``."""

    stage: str  # sim | ret
    cur: int
    clock: int
    top: int


class NsimulT(NamedTuple):
    stage: str  # call | await | move | done
    p: int | None


class NsimulS(NamedTuple):
    stage: str  # loop | call | await
    cur: int | None
    count: int


class NextPair(NamedTuple):
    """Choose a start state, witness one pair of a relation, insist it is
    larger than ``prev``; returns the pair index ``p * n + q``."""

    kind: str  # t-left | t-here | s
    stage: str  # choose | call | await | check
    prev: int
    j: int
    p: int
    q: int


class Member(NamedTuple):
    """Enumerate ``m`` pairs of a relation and test them against a predicate."""

    test: str  # s1 | t | eq
    a: int
    b: int
    kind: str
    j: int
    m: int
    stage: str  # loop | await | test
    k: int
    prev: int


class S1FromT(NamedTuple):
    stage: str  # pair | await
    m: int
    pair: int
    m_next: int


class TFromSStar(NamedTuple):
    stage: str  # pair | await
    m: int
    pair: int
    m_next: int


class SNext(NamedTuple):
    stage: str  # pair | r | first | second | await1 | await2
    m: int
    j: int
    pair: int
    r: int
    m_next: int


class SStar(NamedTuple):
    stage: str  # loop | await
    m: int | None
    t: int


class CheckTable(NamedTuple):
    stage: str  # count | back | enum | await | goto | return
    m: int
    k: int
    ones: int
    prev: int


class TailCheck(NamedTuple):
    stage: str  # start | check | back


class Main(NamedTuple):
    phase: str  # loop | s1 | sstar | t | checked | tailed | fs1 | fsstar | verdict
    m: object


def doubling_rounds(n) -> int:
    """Rounds of squaring needed so that ``2 ** rounds >= n * (n - 1)``."""
    return max(1, 2 * math.ceil(math.log2(n)))


class Cg2Machine(ProcedureMachine):
    """Two-way machine over annotated words for a two-way NFA.

    ``check_table=False`` skips the per-block annotation check (mutation
    testing only).  ``clocked=False`` removes the step budget of the local
    simulation (reference runs only; the machine may then loop).
    """

    def __init__(self, source: NormalizedTwoWayNfa, check_table=True, clocked=True):
        self.source = source
        self.nfa: TwoWayNfa = source.inner
        self.n = source.n
        self.block = self.n * self.n
        self.check_table = check_table
        self.clock_limit = 2 * self.n**3 - 1 if clocked else None
        self.rounds = doubling_rounds(self.n)
        self.initial_m = len(ltable(self.nfa, ()))

    def entry(self, word):
        return Main("loop", self.initial_m), 1, self.block

    def move_glob(self, hp, move):
        if move == LEFT:
            return hp - 1 if hp > 0 else None
        return self.block if hp == 2 * self.block - 1 else hp + 1

    def resume(self, cont, value):
        kind = type(cont)
        if kind is LSeg:
            raise TypeError("LSeg never calls")
        if kind is NsimulT:
            return NsimulT("move", value)
        if kind is NsimulS:
            return NsimulS("loop", value, cont.count - 1)
        if kind is NextPair:
            return cont._replace(stage="check", q=value)
        if kind is Member:
            return cont._replace(stage="test", k=cont.k + 1, prev=value)
        if kind in (S1FromT, TFromSStar):
            return cont._replace(stage="pair", pair=cont.pair + 1, m_next=cont.m_next + value)
        if kind is SNext:
            if cont.stage == "await1":
                if value:
                    return cont._replace(stage="second")
                return cont._replace(stage="r", r=cont.r + 1)
            if value:
                return cont._replace(stage="pair", pair=cont.pair + 1, m_next=cont.m_next + 1)
            return cont._replace(stage="r", r=cont.r + 1)
        if kind is SStar:
            return SStar("loop", value, cont.t + 1)
        if kind is CheckTable:
            return cont._replace(stage="goto", k=cont.k + 1, prev=value)
        if kind is TailCheck:
            raise TypeError("TailCheck never calls")
        if cont.phase == "tailed":
            return cont
        return Main(cont.phase, value)

    def actions(self, frame, symbol, glob):
        return _HANDLERS[type(frame)](self, frame, symbol, glob)

    # -- local simulation

    def _lseg(self, f, symbol, hp):
        n, N = self.n, self.block
        limit = self.clock_limit
        tick = 0 if limit is None else f.clock + 1
        if f.stage == "ret":
            if hp >= N:
                return [Go(f._replace(stage="sim"))]
            if hp == f.top:
                return [Ret(f.cur)]
            return [Go(f, RIGHT)]
        if hp >= N or symbol == LEFT_END:
            if limit is not None and f.clock >= limit:
                return [Abort("clock")]
            acts = []
            for r, d in sorted(self.nfa.targets(f.cur, _sym(symbol))):
                if d == RIGHT and hp == f.top:
                    acts.append(Ret(r))
                else:
                    acts.append(Go(LSeg("sim", r, tick, f.top), d))
            return acts or [Abort("dead end")]
        # reading the previous table off the annotation track
        acts = []
        if f.cur * n <= hp < (f.cur + 1) * n and _bit(symbol) == 1:
            if limit is not None and f.clock >= limit:
                acts.append(Abort("clock"))
            else:
                acts.append(Go(LSeg("ret", hp % n, tick, f.top)))
        acts.append(Abort("window") if hp == 0 else Go(f, LEFT))
        return acts

    def _nsimul_t(self, f, symbol, hp):
        if f.stage == "call":
            return [Call(LSeg("sim", f.p, 0, hp), NsimulT("await", None))]
        if f.stage == "move":
            return [Go(NsimulT("done", f.p), RIGHT)]
        return [Ret(f.p)]

    def _nsimul_s(self, f, symbol, hp):
        if f.stage == "call":
            return [Call(NsimulT("call", f.cur), NsimulS("await", None, f.count))]
        if f.count == 0:
            return [Ret(f.cur)]
        acts = [Go(f._replace(count=f.count - 1))]
        for q, d in sorted(self.nfa.targets(f.cur, _sym(symbol))):
            if d == LEFT:
                acts.append(Go(NsimulS("call", q, f.count), LEFT))
        return acts

    # -- enumeration

    def _next_pair(self, f, symbol, hp):
        if f.stage == "choose":
            move = LEFT if f.kind == "t-left" else 0
            return [Go(f._replace(stage="call", p=p), move) for p in range(self.n)]
        if f.stage == "call":
            if f.kind == "t-left":
                callee = NsimulT("call", f.p)
            elif f.kind == "t-here":
                callee = LSeg("sim", f.p, 0, hp)
            else:
                callee = NsimulS("loop", f.p, f.j)
            return [Call(callee, f._replace(stage="await"))]
        idx = f.p * self.n + f.q
        if idx <= f.prev:
            return [Abort("order")]
        return [Ret(idx)]

    def _member(self, f, symbol, hp):
        if f.stage == "loop":
            if f.k == f.m:
                return [Ret(False)]
            return [Call(NextPair(f.kind, "choose", f.prev, f.j, -1, -1), f._replace(stage="await"))]
        qs, r = divmod(f.prev, self.n)
        if f.test == "eq":
            hit = (qs, r) == (f.a, f.b)
        elif f.test == "s1":
            hit = r == f.b and (qs, LEFT) in self.nfa.targets(f.a, _sym(symbol))
        else:
            hit = qs == f.a and (f.b, RIGHT) in self.nfa.targets(r, _sym(symbol))
        return [Ret(True)] if hit else [Go(f._replace(stage="loop"))]

    # -- counting rounds

    def _s1_from_t(self, f, symbol, hp):
        if f.pair == self.block:
            return [Ret(f.m_next)]
        p, q = divmod(f.pair, self.n)
        if p == q:
            return [Go(f._replace(pair=f.pair + 1))]
        probe = Member("s1", p, q, "t-left", 0, f.m, "loop", 0, -1)
        return [Call(probe, f._replace(stage="await"))]

    def _t_from_sstar(self, f, symbol, hp):
        if f.pair == self.block:
            return [Ret(f.m_next)]
        p, q = divmod(f.pair, self.n)
        probe = Member("t", p, q, "s", self.block, f.m, "loop", 0, -1)
        return [Call(probe, f._replace(stage="await"))]

    def _snext(self, f, symbol, hp):
        if f.stage == "pair":
            if f.pair == self.block:
                return [Ret(f.m_next)]
            return [Go(f._replace(stage="r", r=0))]
        p, q = divmod(f.pair, self.n)
        if f.stage == "r":
            if f.r == self.n:
                return [Go(f._replace(stage="pair", pair=f.pair + 1))]
            probe = Member("eq", p, f.r, "s", f.j, f.m, "loop", 0, -1)
            return [Call(probe, f._replace(stage="await1"))]
        # stage "second"
        probe = Member("eq", f.r, q, "s", f.j, f.m, "loop", 0, -1)
        return [Call(probe, f._replace(stage="await2"))]

    def _sstar(self, f, symbol, hp):
        if f.t == self.rounds:
            return [Ret(f.m)]
        return [Call(SNext("pair", f.m, 2**f.t, 0, 0, 0), SStar("await", None, f.t))]

    # -- annotation checks

    def _check_table(self, f, symbol, hp):
        N = self.block
        if f.stage == "count":
            ones = f.ones + _bit(symbol)
            if hp > N:
                return [Go(f._replace(ones=ones), LEFT)]
            if ones != f.m:
                return [Abort("block count")]
            return [Go(f._replace(stage="back", ones=0))]
        if f.stage in ("back", "return"):
            if hp < 2 * N - 1:
                return [Go(f, RIGHT)]
            return [Go(f._replace(stage="enum"))]
        if f.stage == "enum":
            if f.k == f.m:
                return [Ret(f.m)]
            return [Call(NextPair("t-here", "choose", f.prev, 0, -1, -1), f._replace(stage="await"))]
        # stage "goto": walk to the cell of pair prev
        if hp > N + f.prev:
            return [Go(f, LEFT)]
        if _bit(symbol) != 1:
            return [Abort("block bit")]
        return [Go(f._replace(stage="return"))]

    def _tail_check(self, f, symbol, hp):
        N = self.block
        if f.stage == "back":
            if symbol == RIGHT_END:
                return [Ret(None)]
            return [Go(f, RIGHT)]
        if f.stage == "check" and _bit(symbol) != 0:
            return [Abort("tail bit")]
        if hp > N:
            return [Go(TailCheck("check"), LEFT)]
        return [Go(TailCheck("back"))]

    # -- driver

    def _main(self, f, symbol, hp):
        phase = f.phase
        if phase == "loop":
            if symbol == RIGHT_END:
                return [Call(TailCheck("start"), Main("tailed", f.m))]
            return [Call(S1FromT("pair", f.m, 0, self.n), Main("s1", None))]
        if phase in ("s1", "fs1"):
            nxt = "sstar" if phase == "s1" else "fsstar"
            return [Call(SStar("loop", f.m, 0), Main(nxt, None))]
        if phase == "sstar":
            return [Call(TFromSStar("pair", f.m, 0, 0), Main("t", None))]
        if phase == "t":
            if self.check_table and hp == 2 * self.block - 1:
                return [Call(CheckTable("count", f.m, 0, 0, -1), Main("checked", None))]
            return [Go(Main("loop", f.m), RIGHT)]
        if phase == "checked":
            return [Go(Main("loop", f.m), RIGHT)]
        if phase == "tailed":
            return [Call(S1FromT("pair", f.m, 0, self.n), Main("fs1", None))]
        if phase == "fsstar":
            probe = Member(
                "eq", self.source.restart, self.nfa.accept, "s", self.block, f.m, "loop", 0, -1
            )
            return [Call(probe, Main("verdict", None))]
        if symbol != RIGHT_END:
            return [Abort("halt off the endmarker")]
        return [Halt(Verdict.ACCEPTING if f.m else Verdict.REJECTING)]


_HANDLERS = {
    LSeg: Cg2Machine._lseg,
    NsimulT: Cg2Machine._nsimul_t,
    NsimulS: Cg2Machine._nsimul_s,
    NextPair: Cg2Machine._next_pair,
    Member: Cg2Machine._member,
    S1FromT: Cg2Machine._s1_from_t,
    TFromSStar: Cg2Machine._t_from_sstar,
    SNext: Cg2Machine._snext,
    SStar: Cg2Machine._sstar,
    CheckTable: Cg2Machine._check_table,
    TailCheck: Cg2Machine._tail_check,
    Main: Cg2Machine._main,
}


def build_cg2(source, check_table=True, clocked=True) -> Cg2Machine:
    if isinstance(source, TwoWayNfa):
        source = normalize_restart(source)
    return Cg2Machine(source, check_table, clocked)


# -- fragment entry points -------------------------------------------------


def window_hp(machine: Cg2Machine, pos) -> int:
    """``hp`` of the unique head position ``pos >= 1`` on a fresh run."""
    return machine.block + (pos - 1) % machine.block


def _fragment(machine, x, pos, frame, cap):
    return call_fragment(machine, x, frame, pos, window_hp(machine, pos), cap)


def nsimul_t(machine: Cg2Machine, x, pos, p, cap=DEFAULT_CAP) -> frozenset:
    """End states of the local simulation started in ``p`` on cell ``pos``."""
    rets = _fragment(machine, x, pos, NsimulT("call", p), cap)
    return frozenset(q for q, rpos, _ in rets if rpos == pos + 1)


def nsimul_s(machine: Cg2Machine, x, pos, p, j, cap=DEFAULT_CAP) -> frozenset:
    rets = _fragment(machine, x, pos, NsimulS("loop", p, j), cap)
    return frozenset(q for q, rpos, _ in rets if rpos == pos)


def enum_t(machine: Cg2Machine, x, pos, m, cap=DEFAULT_CAP) -> list:
    """Every successful enumeration of ``m`` left-table pairs, as pair lists."""
    return _enumerate(machine, x, pos, "t-here", 0, m, cap)


def enum_s(machine: Cg2Machine, x, pos, m, j, cap=DEFAULT_CAP) -> list:
    return _enumerate(machine, x, pos, "s", j, m, cap)


def _enumerate(machine, x, pos, kind, j, m, cap):
    hp = window_hp(machine, pos)
    n = machine.n
    runs = [((), -1)]
    for _ in range(m):
        nxt = []
        for pairs, prev in runs:
            frame = NextPair(kind, "choose", prev, j, -1, -1)
            for idx, rpos, _ in call_fragment(machine, x, frame, pos, hp, cap):
                if rpos == pos:
                    nxt.append((pairs + (divmod(idx, n),), idx))
        runs = nxt
    return sorted(pairs for pairs, _ in runs)


def count_fragment(machine: Cg2Machine, x, pos, step, m, cap=DEFAULT_CAP) -> frozenset:
    """Values returned by one counting round at cell ``pos``.

    ``step`` is ``s1``, ``sstar``, ``t`` or ``check``.
    """
    frame = {
        "s1": lambda: S1FromT("pair", m, 0, machine.n),
        "sstar": lambda: SStar("loop", m, 0),
        "t": lambda: TFromSStar("pair", m, 0, 0),
        "check": lambda: CheckTable("count", m, 0, 0, -1),
    }[step]()
    rets = _fragment(machine, x, pos, frame, cap)
    return frozenset(v for v, rpos, _ in rets if rpos == pos)


def snext_fragment(machine: Cg2Machine, x, pos, m, j, cap=DEFAULT_CAP) -> frozenset:
    rets = _fragment(machine, x, pos, SNext("pair", m, j, 0, 0, 0), cap)
    return frozenset(v for v, rpos, _ in rets if rpos == pos)


# -- state accounting ------------------------------------------------------
# ``n`` is the normalised state count; ``N = n * n``.


def _sq(n):
    return n * n + 1  # a count or pair index in [0, N], or -1 .. N - 1


def _jvals(n):
    return doubling_rounds(n) + 2  # 0, the doubling powers, and N


ACTIVE_DOMAINS = {
    LSeg: {
        "stage": lambda n: 2,
        "cur": lambda n: n,
        "clock": lambda n: 2 * n**3,
        "top": lambda n: n * n + 1,
    },
    NsimulT: {"stage": lambda n: 3, "p": lambda n: n},
    NsimulS: {"stage": lambda n: 2, "cur": lambda n: n, "count": _sq},
    NextPair: {
        "kind": lambda n: 3,
        "stage": lambda n: 3,
        "prev": _sq,
        "j": _jvals,
        "p": lambda n: n + 1,
        "q": lambda n: n + 1,
    },
    Member: {
        "test": lambda n: 3,
        "a": lambda n: n,
        "b": lambda n: n,
        "kind": lambda n: 2,
        "j": _jvals,
        "m": _sq,
        "stage": lambda n: 2,
        "k": _sq,
        "prev": _sq,
    },
    S1FromT: {"m": _sq, "pair": _sq, "m_next": _sq},
    TFromSStar: {"m": _sq, "pair": _sq, "m_next": _sq},
    SNext: {
        "stage": lambda n: 3,
        "m": _sq,
        "j": _jvals,
        "pair": _sq,
        "r": lambda n: n + 1,
        "m_next": _sq,
    },
    SStar: {"m": _sq, "t": lambda n: doubling_rounds(n) + 1},
    CheckTable: {
        "stage": lambda n: 5,
        "m": _sq,
        "k": _sq,
        "ones": _sq,
        "prev": _sq,
    },
    TailCheck: {"stage": lambda n: 3},
    Main: {"phase": lambda n: 9, "m": _sq},
}

# What a waiting caller keeps beyond the arguments its callee carries.
WAITING_DOMAINS = {
    (Main, TailCheck): {"m": _sq},
    (Main, S1FromT): {"phase": lambda n: 2},
    (Main, SStar): {"phase": lambda n: 2},
    (Main, TFromSStar): {"phase": lambda n: 1},
    (Main, CheckTable): {"phase": lambda n: 1},
    (Main, Member): {"phase": lambda n: 1},
    (S1FromT, Member): {"m_next": _sq},
    (TFromSStar, Member): {"m_next": _sq},
    (SStar, SNext): {"t": lambda n: doubling_rounds(n) + 1},
    # the probe carries (p, r) or (r, q); only the other end of the pair is kept
    (SNext, Member): {"stage": lambda n: 2, "end": lambda n: n, "m_next": _sq},
    (CheckTable, NextPair): {"m": _sq, "k": _sq},
    (Member, NextPair): {
        "test": lambda n: 3,
        "a": lambda n: n,
        "b": lambda n: n,
        "m": _sq,
        "k": _sq,
    },
    (NextPair, NsimulT): {"prev": _sq, "p": lambda n: n},
    (NextPair, LSeg): {"prev": _sq, "p": lambda n: n},
    (NextPair, NsimulS): {"prev": _sq, "p": lambda n: n, "j": _jvals},
    (NsimulS, NsimulT): {"count": _sq},
    (NsimulT, LSeg): {},
}

STACK_SHAPES = prefixes(
    (Main, TailCheck),
    (Main, S1FromT, Member, NextPair, NsimulT, LSeg),
    (Main, SStar, SNext, Member, NextPair, NsimulS, NsimulT, LSeg),
    (Main, TFromSStar, Member, NextPair, NsimulS, NsimulT, LSeg),
    (Main, CheckTable, NextPair, LSeg),
    (Main, Member, NextPair, NsimulS, NsimulT, LSeg),
)

SIZE_MODEL = SizeModel(STACK_SHAPES, ACTIVE_DOMAINS, WAITING_DOMAINS, head=lambda n: 2 * n * n)


def structural_bound(normalized_n) -> int:
    return SIZE_MODEL.bound(normalized_n)


def reachable_state_count(machine: Cg2Machine, words, cap=DEFAULT_CAP) -> int:
    """Distinct flat ``(stack, hp)`` states over runs on the given inputs."""
    states = set()
    for x in words:
        for config in reachable_configs(machine, x, cap):
            states.add(config.state)
    return len(states)


def state_space_report(machine: Cg2Machine, words=None, cap=DEFAULT_CAP) -> dict:
    """Structural bound and per-field domains; reachable count if ``words``."""
    n = machine.n
    report = {
        "n": n - 1,
        "normalized_n": n,
        "structural_bound": structural_bound(n),
        "per_field_cardinalities": SIZE_MODEL.cardinalities(n),
    }
    if words is not None:
        report["reachable"] = reachable_state_count(machine, words, cap)
    return report
