import json
import random

import pytest

from twowaycg.core import parse_annotated, validate
from twowaycg.engine import decide
from twowaycg.verify import (
    SweepReport,
    build_machine,
    check_property_d,
    check_tables_suite,
    malformed_variants,
    oracle_membership,
    random_1nfa,
    random_2nfa,
    random_long_words,
    words_upto,
)


def test_oracle_examples(a1, a2):
    assert oracle_membership(a1, "ba") is True
    assert oracle_membership(a1, "") is False
    # A2 never finishes on the right endmarker in its accepting state
    assert [oracle_membership(a2, "a" * k) for k in range(5)] == [False] * 5


def test_generators_are_seeded_and_valid():
    for make in (random_1nfa, random_2nfa):
        a = make(3, rng=random.Random(42))
        b = make(3, rng=random.Random(42))
        assert a == b
        assert validate(a) == []


def test_words_upto_counts():
    assert len(list(words_upto(("a", "b"), 3))) == 15


def test_malformed_variants_exhaustive_when_short():
    x = (("a", 0), ("b", 1), ("a", 0))
    variants = list(malformed_variants(x, 0, random.Random(0)))
    assert len(variants) == 7
    assert x not in variants


def test_malformed_variants_flips_when_long():
    x = tuple(("a", 0) for _ in range(8))
    variants = list(malformed_variants(x, 3, random.Random(0)))
    assert 8 <= len(variants) <= 11


def test_cg1_sweep_on_a1(a1):
    report = check_property_d("cg1", a1, 6)
    assert report.ok
    assert report.words == 127
    assert report.accept_agreements == report.reject_agreements == 127
    assert report.malformed == report.malformed_silent > 0


def test_cg2_sweep_on_a2(a2):
    report = check_property_d("cg2", a2, 3)
    assert report.ok
    assert report.words == 4


def test_mutation_is_detected(a1):
    report = check_property_d("cg1", a1, 4, mutate=True)
    witnesses = report.witnesses("malformed-accept")
    assert witnesses
    # each witness replays to the same failure
    for w in witnesses[:5]:
        x = parse_annotated(w["annotated"])
        assert decide(build_machine("cg1", a1, mutate=True), x).accept_path
        assert not decide(build_machine("cg1", a1), x).accept_path


def test_parallel_sweep_matches_serial():
    nfa = random_1nfa(3, rng=random.Random(9))
    serial = check_property_d("cg1", nfa, 4, seed=3)
    parallel = check_property_d("cg1", nfa, 4, seed=3, jobs=2)
    assert serial.to_dict() == parallel.to_dict()


def test_long_words_are_checked():
    nfa = random_1nfa(2, rng=random.Random(1))
    longs = random_long_words(nfa.alphabet, [9, 10], 3, seed=0)
    report = check_property_d("cg1", nfa, 1, long_words=longs)
    assert report.words == 3 + 3
    assert report.ok


def test_tables_suite(a2):
    assert check_tables_suite(a2, 3, 4).ok
    report = check_tables_suite(random_2nfa(3, rng=random.Random(4)), 3, 4)
    assert report.ok and report.checks > 100


def test_report_json_roundtrip():
    report = SweepReport("x", "cg1", 2, words=3)
    report.failures.append({"kind": "conflict", "word": "a"})
    data = json.loads(report.to_json())
    assert data["ok"] is False and data["words"] == 3
    other = SweepReport("y", "cg1", 2, words=1)
    other.merge(report)
    assert other.words == 4 and not other.ok
