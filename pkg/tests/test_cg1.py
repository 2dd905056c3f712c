import itertools
import random

import pytest

from twowaycg import cg1
from twowaycg.annot import AnnotationSpec, annotate
from twowaycg.cg1 import CheckAnnot, CountNext, Member, NextQx, Nsimul, build_cg1
from twowaycg.core import annotated_alphabet, annotated_token
from twowaycg.engine import call_fragment, decide, reachable_configs
from twowaycg.tables import qx_1nfa
from twowaycg.verify import oracle_membership, random_1nfa, words_upto


def _sources():
    rng = random.Random(11)
    return [random_1nfa(n, rng=rng) for n in (2, 3, 3, 4)]


def _x(nfa, w):
    return annotate(AnnotationSpec.for_1nfa(nfa), w)


def _fragment(machine, x, frame, pos):
    return call_fragment(machine, x, frame, pos, pos % machine.n)


def test_nsimul_examples(a1):
    m = build_cg1(a1)
    x = _x(a1, "ab")
    assert _fragment(m, x, Nsimul("scan", -1, 0, 0), 2) == {(0, 2, 0)}
    assert {v for v, _, _ in _fragment(m, x, Nsimul("scan", -1, 0, 0), 0)} == {a1.start}


def test_nsimul_needs_a_selectable_bit(a1):
    m = build_cg1(a1)
    # second block all zero: nothing to select when reading it
    x = (("a", 1), ("b", 0), ("a", 0), ("a", 0))
    assert _fragment(m, x, Nsimul("scan", -1, 0, 0), 4) == frozenset()


@pytest.mark.parametrize("nfa", _sources())
def test_nsimul_returns_frontier(nfa):
    m = build_cg1(nfa)
    rng = random.Random(2)
    for _ in range(12):
        w = tuple(rng.choice(nfa.alphabet) for _ in range(rng.randint(0, 3 * nfa.n)))
        x = _x(nfa, w)
        for pos in range(len(w) + 1):
            for lag in (0, 1):
                got = _fragment(m, x, Nsimul("scan", -1, 0, lag), pos)
                assert {v for v, _, _ in got} == qx_1nfa(nfa, w[:pos])
                assert {p for _, p, _ in got} <= {pos}


def test_member_examples(a1):
    m = build_cg1(a1)
    x = _x(a1, "a")
    assert _fragment(m, x, Member("loop", 0, 2, -1), 2) == {(True, 2, 0)}
    x = _x(a1, "ab")
    assert _fragment(m, x, Member("loop", 0, 1, -1), 3) == {(False, 3, 1)}
    assert {v for v, _, _ in _fragment(m, x, Member("loop", 0, 1, -1), 1)} == {False}


@pytest.mark.parametrize("nfa", _sources())
def test_enumeration_contracts(nfa):
    m = build_cg1(nfa)
    rng = random.Random(4)
    for _ in range(10):
        w = tuple(rng.choice(nfa.alphabet) for _ in range(rng.randint(1, 2 * nfa.n + 1)))
        x = _x(nfa, w)
        for pos in range(1, len(w) + 2):
            qx = qx_1nfa(nfa, w[: pos - 1])
            for q_prev in range(-1, nfa.n):
                got = _fragment(m, x, NextQx("start", 1, q_prev), pos)
                assert {v for v, _, _ in got} == {r for r in qx if r > q_prev}
            size = len(qx)
            member = _fragment(m, x, Member("loop", 0, size, -1), pos)
            assert {v for v, _, _ in member} == {nfa.accept in qx}
            # an overstated m can never certify absence
            over = _fragment(m, x, Member("loop", 0, size + 1, -1), pos)
            assert {v for v, _, _ in over} == ({True} if nfa.accept in qx else set())


@pytest.mark.parametrize("nfa", _sources())
def test_count_next(nfa):
    m = build_cg1(nfa)
    for w in words_upto(nfa.alphabet, 4):
        x = _x(nfa, w)
        for pos in range(1, len(w) + 1):
            size = len(qx_1nfa(nfa, w[: pos - 1]))
            got = _fragment(m, x, CountNext("loop", 0, 0, 0, size, -1), pos)
            assert {v for v, _, _ in got} == {len(qx_1nfa(nfa, w[:pos]))}


def test_count_next_examples(a1):
    m = build_cg1(a1)
    assert {v for v, _, _ in _fragment(m, _x(a1, "a"), CountNext("loop", 0, 0, 0, 1, -1), 1)} == {2}
    assert {v for v, _, _ in _fragment(m, _x(a1, "ab"), CountNext("loop", 0, 0, 0, 2, -1), 2)} == {1}


@pytest.mark.parametrize("nfa", _sources())
def test_check_annot_accepts_exactly_the_valid_block(nfa):
    m = build_cg1(nfa)
    n = nfa.n
    rng = random.Random(9)
    for _ in range(6):
        w = tuple(rng.choice(nfa.alphabet) for _ in range(2 * n))
        x = _x(nfa, w)
        size = len(qx_1nfa(nfa, w[:n]))
        frame = CheckAnnot("count", size, 0, 0, 0, -1)
        assert {v for v, _, _ in _fragment(m, x, frame, n)} == {size}
        for bits in itertools.product((0, 1), repeat=n):
            y = tuple(zip(w[:n], bits)) + x[n:]
            ok = _fragment(m, y, frame, n) != frozenset()
            assert ok == (y[:n] == x[:n])


def test_head_bookkeeping_and_window(a1):
    m = build_cg1(random_1nfa(3, rng=random.Random(1)))
    spec = AnnotationSpec.for_1nfa(m.source)
    for w in words_upto(m.source.alphabet, 5):
        for config in reachable_configs(m, annotate(spec, w)):
            stack, glob = config.state
            assert glob == config.pos % m.n
            if isinstance(stack, tuple):
                for frame in stack:
                    if isinstance(frame, Nsimul):
                        assert frame.dist < 2 * m.n


@pytest.mark.parametrize("k", range(9))
def test_a1_property_d(a1, k):
    m = build_cg1(a1)
    for w in itertools.product(a1.alphabet, repeat=k):
        out = decide(m, _x(a1, w))
        assert out.accept_path == (w[-1:] == ("a",))
        assert out.reject_path == (not out.accept_path)


def test_explicit_matches_machine_on_a1(a1):
    m = build_cg1(a1)
    explicit, vm_states = cg1.compile_explicit(m)
    assert explicit.n == vm_states + 4
    letters = annotated_alphabet(a1.alphabet)
    for k in range(5):
        for x in itertools.product(letters, repeat=k):
            tokens = tuple(annotated_token(s) for s in x)
            assert decide(explicit, tokens) == decide(m, x)


def test_reachable_counts_are_monotone_and_bounded():
    rng = random.Random(0)
    counts = []
    for n in (2, 3, 4):
        _, count = cg1.compile_explicit(build_cg1(random_1nfa(n, rng=rng)))
        assert count <= cg1.structural_bound(n)
        counts.append(count)
    assert counts == sorted(counts)


def test_structural_accounting():
    assert cg1.growing_field_count() == 8
    c = cg1.structural_constant()
    assert 23 < c < 25
    ratios = [cg1.structural_bound(n) / n**8 for n in (10, 100, 1000)]
    assert ratios == sorted(ratios, reverse=True)
    assert ratios[-1] < 1.05 * c
    cards = cg1.field_cardinalities(4)
    assert cards["Nsimul"]["dist"] == 8


def test_wrong_tail_is_silent(a1):
    m = build_cg1(a1)
    x = (("a", 1), ("b", 0), ("a", 1))
    out = decide(m, x)
    assert not out.accept_path and not out.reject_path
    assert oracle_membership(a1, "aba")
