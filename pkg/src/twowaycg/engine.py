"""Exhaustive search over the configuration graph of two-way machines.

Any object with ``initial(word)``, ``step(config, symbol)`` and
``classify(config)`` can be decided.  Configurations are ``(state, pos)``
pairs over the tape ``< w >``; positions run from 0 (left endmarker) to
``len(w) + 1`` (right endmarker).

Machines built from procedures (see :class:`ProcedureMachine`) are also
searched procedure by procedure: every call is summarised once per entry
configuration and the summary is reused.  Because the call depth of such a
machine is bounded, this gives exactly the reachable verdicts of the flat
configuration graph while visiting far fewer nodes.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, NamedTuple, Protocol

from .core import LEFT, LEFT_END, RIGHT, RIGHT_END, TwoWayNfa, annotated_token

DEFAULT_CAP = 10**7


class ResourceLimitError(RuntimeError):
    """The explored configuration space exceeded the cap."""


class Verdict(enum.Enum):
    LIVE = "live"
    ACCEPTING = "accepting"
    REJECTING = "rejecting"
    ABORTING = "aborting"


class Configuration(NamedTuple):
    state: Hashable
    pos: int


@dataclass(frozen=True)
class Outcome:
    accept_path: bool
    reject_path: bool

    @property
    def conflicting(self):
        return self.accept_path and self.reject_path


class TwoWayMachine(Protocol):
    def initial(self, word) -> Configuration: ...

    def step(self, config: Configuration, symbol) -> Iterable[Configuration]: ...

    def classify(self, config: Configuration) -> Verdict: ...


def tape_of(word) -> tuple:
    return (LEFT_END,) + tuple(word) + (RIGHT_END,)


def reachable_configs(machine, word, cap=DEFAULT_CAP) -> set:
    """Forward closure of the initial configuration (flat search)."""
    tape = tape_of(word)
    last = len(tape) - 1
    start = machine.initial(word)
    seen = {start}
    queue = deque([start])
    while queue:
        config = queue.popleft()
        if machine.classify(config) is not Verdict.LIVE:
            continue
        for nxt in machine.step(config, tape[config.pos]):
            if not 0 <= nxt.pos <= last or nxt in seen:
                continue
            seen.add(nxt)
            if len(seen) > cap:
                raise ResourceLimitError(f"more than {cap} configurations")
            queue.append(nxt)
    return seen


def decide_flat(machine, word, cap=DEFAULT_CAP) -> Outcome:
    accept = reject = False
    for config in reachable_configs(machine, word, cap):
        verdict = machine.classify(config)
        accept |= verdict is Verdict.ACCEPTING
        reject |= verdict is Verdict.REJECTING
    return Outcome(accept, reject)


def decide(machine, word, cap=DEFAULT_CAP) -> Outcome:
    """Whether some run accepts and whether some run rejects ``word``."""
    if isinstance(machine, ProcedureMachine):
        return explore(machine, word, cap).outcome
    if isinstance(machine, TwoWayNfa):
        return decide_nfa(machine, word, cap)
    return decide_flat(machine, word, cap)


# -- plain two-way NFAs ----------------------------------------------------

class NfaMachine:
    """A :class:`TwoWayNfa` seen through the machine protocol, never halting.

    The run starts in ``start`` on the first input cell (position 1).
    """

    def __init__(self, nfa: TwoWayNfa):
        self.nfa = nfa

    def initial(self, word):
        return Configuration(self.nfa.start, 1)

    def step(self, config, symbol):
        for q, d in self.nfa.targets(config.state, symbol):
            yield Configuration(q, config.pos + d)

    def classify(self, config):
        return Verdict.LIVE


class _HaltingNfa(NfaMachine):
    # accept/reject states are final on the right endmarker
    def __init__(self, nfa, word):
        super().__init__(nfa)
        self._right = len(word) + 1

    def classify(self, config):
        if config.pos == self._right:
            if config.state == self.nfa.accept:
                return Verdict.ACCEPTING
            if config.state == self.nfa.reject:
                return Verdict.REJECTING
        return Verdict.LIVE


def decide_nfa(nfa: TwoWayNfa, word, cap=DEFAULT_CAP) -> Outcome:
    return decide_flat(_HaltingNfa(nfa, word), word, cap)


def bounded_search(nfa: TwoWayNfa, word, starts, limit, cap=DEFAULT_CAP):
    """States entering position ``limit + 1`` from ``starts``.

    ``starts`` are ``(state, pos)`` pairs; the search never expands a
    configuration at a position greater than ``limit``.
    """
    tape = tape_of(word)
    seen = set(starts)
    queue = deque(seen)
    exits = set()
    while queue:
        p, pos = queue.popleft()
        if pos > limit:
            exits.add(p)
            continue
        for q, d in nfa.targets(p, tape[pos]):
            nxt = (q, pos + d)
            if not 0 <= nxt[1] < len(tape) or nxt in seen:
                continue
            seen.add(nxt)
            if len(seen) > cap:
                raise ResourceLimitError(f"more than {cap} configurations")
            queue.append(nxt)
    return exits


# -- procedure machines ----------------------------------------------------

class Go(NamedTuple):
    frame: Any
    move: int = 0


class Call(NamedTuple):
    callee: Any
    cont: Any


class Ret(NamedTuple):
    value: Any


class Halt(NamedTuple):
    verdict: Verdict


class Abort(NamedTuple):
    reason: str


ABORTED = "aborted"


class ProcedureMachine:
    """Base class for machines written as cooperating procedures.

    A procedure is a family of immutable frames.  ``actions(frame, symbol,
    glob)`` lists the nondeterministic options of the top frame: move
    (:class:`Go`), call a procedure (:class:`Call`; ``cont`` is the caller
    frame to resume), return (:class:`Ret`), halt or abort.  ``resume(cont,
    value)`` builds the caller frame after a return.  ``glob`` is
    machine-wide head bookkeeping updated by ``move_glob`` on every move;
    ``move_glob`` returns ``None`` to forbid a move.

    Flat states are ``(stack, glob)`` with ``stack`` a tuple of frames, the
    last one active, so the class also satisfies the plain machine protocol.
    """

    def entry(self, word):
        """Initial ``(frame, pos, glob)``."""
        raise NotImplementedError

    def actions(self, frame, symbol, glob):
        raise NotImplementedError

    def resume(self, cont, value):
        raise NotImplementedError

    def move_glob(self, glob, move):
        return glob

    # flat protocol

    def initial(self, word):
        frame, pos, glob = self.entry(word)
        return Configuration(((frame,), glob), pos)

    def step(self, config, symbol):
        (stack, glob), pos = config
        if not isinstance(stack, tuple):
            return
        for act in self.actions(stack[-1], symbol, glob):
            kind = type(act)
            if kind is Go:
                if act.move:
                    g2 = self.move_glob(glob, act.move)
                    if g2 is None:
                        continue
                else:
                    g2 = glob
                yield Configuration((stack[:-1] + (act.frame,), g2), pos + act.move)
            elif kind is Call:
                yield Configuration((stack[:-1] + (act.cont, act.callee), glob), pos)
            elif kind is Ret:
                caller = self.resume(stack[-2], act.value)
                yield Configuration((stack[:-2] + (caller,), glob), pos)
            elif kind is Halt:
                yield Configuration((act.verdict, glob), pos)
            else:
                yield Configuration(((ABORTED, act.reason), glob), pos)

    def classify(self, config):
        stack = config.state[0]
        if isinstance(stack, Verdict):
            return stack
        if stack[0] == ABORTED:
            return Verdict.ABORTING
        return Verdict.LIVE


class Exploration:
    """Result of a procedure-summary search.

    ``summaries`` maps ``(frame, pos, glob)`` call entries to the set of
    ``(value, pos, glob)`` returns; ``nodes`` maps each entry (and ``None``
    for the top level) to the configurations visited inside it.
    """

    def __init__(self, machine, word, cap, keep_nodes=False):
        self.machine = machine
        self.word = tuple(word)
        self.tape = tape_of(word)
        self.cap = cap
        self.count = 0
        self.summaries: dict = {}
        self.keep_nodes = keep_nodes
        self.nodes: dict = {}
        self.halts: set = set()
        self.aborts: dict = {}

    def run(self):
        frame, pos, glob = self.machine.entry(self.word)
        self._search(None, frame, pos, glob)
        return self

    @property
    def outcome(self):
        return Outcome(Verdict.ACCEPTING in self.halts, Verdict.REJECTING in self.halts)

    def summary(self, frame, pos, glob):
        key = (frame, pos, glob)
        found = self.summaries.get(key)
        if found is None:
            found = self._search(key, frame, pos, glob)
        return found

    def _search(self, key, frame, pos, glob):
        machine = self.machine
        tape = self.tape
        last = len(tape) - 1
        start = (frame, pos, glob)
        seen = {start}
        queue = deque([start])
        returns = set()
        while queue:
            frame, pos, glob = queue.popleft()
            for act in machine.actions(frame, tape[pos], glob):
                kind = type(act)
                if kind is Go:
                    if act.move:
                        npos = pos + act.move
                        if not 0 <= npos <= last:
                            continue
                        g2 = machine.move_glob(glob, act.move)
                        if g2 is None:
                            continue
                        nxt = (act.frame, npos, g2)
                    else:
                        nxt = (act.frame, pos, glob)
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
                elif kind is Call:
                    for value, rpos, rglob in self.summary(act.callee, pos, glob):
                        nxt = (machine.resume(act.cont, value), rpos, rglob)
                        if nxt not in seen:
                            seen.add(nxt)
                            queue.append(nxt)
                elif kind is Ret:
                    returns.add((act.value, pos, glob))
                elif kind is Halt:
                    self.halts.add(act.verdict)
                else:
                    self.aborts[act.reason] = self.aborts.get(act.reason, 0) + 1
            self.count += 1
            if self.count > self.cap:
                raise ResourceLimitError(f"more than {self.cap} configurations")
        returns = frozenset(returns)
        if key is not None:
            self.summaries[key] = returns
        if self.keep_nodes:
            self.nodes[key] = seen
        return returns


def explore(machine: ProcedureMachine, word, cap=DEFAULT_CAP, keep_nodes=False) -> Exploration:
    return Exploration(machine, word, cap, keep_nodes).run()


def call_fragment(machine: ProcedureMachine, word, frame, pos, glob, cap=DEFAULT_CAP):
    """Returns of one procedure invocation: set of ``(value, pos, glob)``."""
    return Exploration(machine, word, cap).summary(frame, pos, glob)


# -- explicit compilation --------------------------------------------------


def unfold(machine: ProcedureMachine, letters, cap=DEFAULT_CAP, inputs=None):
    """Unfold a procedure machine into a plain :class:`TwoWayNfa`.

    ``letters`` are the ``(symbol, bit)`` input letters; the compiled machine
    reads them as ``symbol/bit`` tokens.  Stationary steps (calls, returns,
    bookkeeping) are folded into the moving transitions that follow them.
    Every ``(state, letter)`` pair is probed, including combinations no run
    can reach, so handlers must tolerate any letter.  A halt on the right
    endmarker compiles to a left move into a helper state that steps back
    right into the verdict state.  Returns ``(explicit, vm_states)`` where
    ``vm_states`` counts the reachable virtual-machine states.

    With ``inputs``, only the ``(state, letter)`` pairs met by runs on those
    inputs are probed; the result then agrees with the machine on exactly
    those inputs and is far smaller.
    """
    symbols = (LEFT_END,) + tuple(letters) + (RIGHT_END,)
    probes = None
    if inputs is not None:
        probes = {}
        for x in inputs:
            tape = tape_of(x)
            for config in reachable_configs(machine, x, cap):
                probes.setdefault(config.state, set()).add(tape[config.pos])
    token = {s: s if s in (LEFT_END, RIGHT_END) else annotated_token(s) for s in symbols}
    start = machine.initial(()).state
    index = {start: 0}
    order = [start]
    moves: dict = {}
    halts: dict = {}
    probe = 1  # stationary closure ignores the real position
    i = 0
    while i < len(order):
        state = order[i]
        i += 1
        for sym in symbols if probes is None else probes.get(state, ()):
            seen = {state}
            stack = [state]
            while stack:
                cur = stack.pop()
                for nxt in machine.step(Configuration(cur, probe), sym):
                    verdict = machine.classify(nxt)
                    if verdict in (Verdict.ACCEPTING, Verdict.REJECTING):
                        halts.setdefault((state, sym), set()).add(verdict)
                    elif verdict is Verdict.ABORTING:
                        continue
                    elif nxt.pos != probe:
                        if nxt.state not in index:
                            index[nxt.state] = len(order)
                            order.append(nxt.state)
                            if len(order) > cap:
                                raise ResourceLimitError(f"more than {cap} states")
                        moves.setdefault((state, sym), set()).add(
                            (index[nxt.state], nxt.pos - probe)
                        )
                    elif nxt.state not in seen:
                        seen.add(nxt.state)
                        stack.append(nxt.state)

    vm_states = len(order)
    acc, rej, acc_pre, rej_pre = range(vm_states, vm_states + 4)
    delta = {}
    for (state, sym), targets in moves.items():
        delta[(index[state], token[sym])] = set(targets)
    for (state, sym), verdicts in halts.items():
        if sym != RIGHT_END:
            raise ValueError("machine halts away from the right endmarker")
        for verdict in verdicts:
            pre = acc_pre if verdict is Verdict.ACCEPTING else rej_pre
            delta.setdefault((index[state], token[sym]), set()).add((pre, LEFT))
    for pre, final in ((acc_pre, acc), (rej_pre, rej)):
        for sym in symbols[:-1]:
            delta[(pre, token[sym])] = {(final, RIGHT)}
    alphabet = tuple(token[s] for s in symbols[1:-1])
    return TwoWayNfa(vm_states + 4, alphabet, delta, 0, acc, rej), vm_states
