"""Crossing tables of a two-way NFA, built one symbol at a time.

The left table of a prefix ``u`` records, for every state ``p`` entered on
the last cell of ``u``, the states in which the run can first leave ``u`` to
the right.  Tables of longer prefixes follow from shorter ones and the
transition function alone, and membership is read off the last one.
"""

import random

from twowaycg.core import RIGHT_END
from twowaycg.tables import (
    accepts_via_ltables,
    encode_rel,
    ltable,
    normalize_restart,
    s_star,
    update_ltable,
)
from twowaycg.verify import oracle_membership, random_2nfa

nfa = random_2nfa(2, rng=random.Random(14))
norm = normalize_restart(nfa)
inner = norm.inner
print(f"source: {nfa.n} states; normalized: {inner.n} states, restart state {norm.restart}")

word = ("a", "b", "b", "a", "b")
table = ltable(inner, ())
print(f"\nprefix       table bits   pairs")
print(f"{'(empty)':12} {encode_rel(table, inner.n)}    {sorted(table)}")
for k, sym in enumerate(word, start=1):
    table = update_ltable(table, sym, inner)
    assert table == ltable(inner, word[:k])
    print(f"{''.join(word[:k]):12} {encode_rel(table, inner.n)}    {sorted(table)}")

# The restart row of a table is the set of states reaching the right end.
print("\nword   via tables   oracle")
for w in ["", "a", "ab", "ba", "abba", "babab"]:
    print(f"{w or '(empty)':6} {accepts_via_ltables(norm, w)!s:12} {oracle_membership(nfa, w)}")

star = s_star(inner, word, RIGHT_END)
print(f"\nclosure on the right end for {''.join(word)}: {sorted(star)}")
