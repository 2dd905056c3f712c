import itertools
import random
from typing import NamedTuple

import pytest
from hypothesis import given, settings, strategies as st

from twowaycg.core import LEFT, LEFT_END, RIGHT, RIGHT_END, TwoWayNfa, annotated_alphabet
from twowaycg.engine import (
    Call,
    Go,
    Halt,
    ProcedureMachine,
    ResourceLimitError,
    Ret,
    Verdict,
    call_fragment,
    decide,
    decide_flat,
    reachable_configs,
    unfold,
)
from twowaycg.verify import oracle_membership, random_2nfa, words_upto


def test_a2_empty_word_does_not_accept(a2):
    out = decide(a2, ())
    assert not out.accept_path and not out.reject_path


@pytest.mark.parametrize("k", range(5))
def test_a2_matches_oracle(a2, k):
    word = ("a",) * k
    assert decide(a2, word).accept_path == oracle_membership(a2, word)


def _bounce():
    # right to the end, back to the start, right again into the accept state
    return TwoWayNfa(
        3,
        ("a", "b"),
        {
            (0, "a"): {(0, RIGHT)},
            (0, "b"): {(0, RIGHT)},
            (0, RIGHT_END): {(1, LEFT)},
            (1, "a"): {(1, LEFT)},
            (1, "b"): {(1, LEFT)},
            (1, LEFT_END): {(2, RIGHT)},
            (2, "a"): {(2, RIGHT)},
            (2, "b"): {(2, RIGHT)},
        },
        0,
        2,
    )


def test_bounce_accepts_everything():
    m = _bounce()
    for w in words_upto(m.alphabet, 4):
        assert decide(m, w).accept_path


def test_reject_state_on_right_end():
    m = TwoWayNfa(2, ("a",), {(0, "a"): {(0, RIGHT)}, (0, RIGHT_END): set()}, 0, 1, reject=0)
    assert decide(m, ("a", "a")) == decide(m, ("a",))
    assert decide(m, ("a",)).reject_path and not decide(m, ("a",)).accept_path


def test_cap_is_enforced():
    with pytest.raises(ResourceLimitError):
        decide(_bounce(), ("a",) * 6, cap=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_decide_agrees_with_oracle(n, seed):
    m = random_2nfa(n, rng=random.Random(seed))
    rng = random.Random(seed + 1)
    for k in range(9):
        w = tuple(rng.choice(m.alphabet) for _ in range(k))
        assert decide(m, w).accept_path == oracle_membership(m, w)


# A tiny procedure machine: walk to the right end counting ones, then halt
# with the parity.  It exercises calls, returns, head bookkeeping and halts.


class Top(NamedTuple):
    parity: int | None = None


class Walk(NamedTuple):
    parity: int = 0


class Parity(ProcedureMachine):
    def entry(self, word):
        return Top(), 1, 0

    def actions(self, frame, symbol, glob):
        if type(frame) is Top:
            if frame.parity is None:
                return [Call(Walk(), frame)]
            if symbol == RIGHT_END:
                return [Halt(Verdict.ACCEPTING if frame.parity == 0 else Verdict.REJECTING)]
            return []
        if symbol == RIGHT_END:
            return [Ret(frame.parity)]
        if symbol == LEFT_END:
            return []
        return [Go(Walk(frame.parity ^ symbol[1]), RIGHT)]

    def resume(self, cont, value):
        return cont._replace(parity=value)

    def move_glob(self, glob, move):
        return (glob + move) % 2


LETTERS = annotated_alphabet(("a",))


def _inputs(k):
    return list(itertools.product(LETTERS, repeat=k))


@pytest.mark.parametrize("k", range(5))
def test_summary_search_matches_flat_search(k):
    m = Parity()
    for x in _inputs(k):
        ones = sum(b for _, b in x) % 2
        out = decide(m, x)
        assert out == decide_flat(m, x)
        assert out.accept_path == (ones == 0) and out.reject_path == (ones == 1)


def test_call_fragment_returns_value_position_and_glob():
    x = (("a", 1), ("a", 1), ("a", 1))
    assert call_fragment(Parity(), x, Walk(), 1, 0) == {(1, 4, 1)}


def test_reachable_configs_include_halt():
    configs = reachable_configs(Parity(), (("a", 1),))
    assert any(c.state[0] is Verdict.REJECTING for c in configs)


def test_unfold_agrees_with_machine():
    m = Parity()
    explicit, vm_states = unfold(m, LETTERS)
    assert vm_states > 0
    for k in range(5):
        for x in _inputs(k):
            tokens = tuple(f"{s}/{b}" for s, b in x)
            assert decide(explicit, tokens) == decide(m, x)
