"""How many states the two constructions need.

The structural count sums, over every possible call stack, the product of
the value ranges of the fields live in it.  The reachable count is what an
exhaustive exploration actually visits.
"""

import random

from twowaycg import cg1, cg2
from twowaycg.annot import AnnotationSpec, annotate
from twowaycg.verify import random_1nfa, random_2nfa, words_upto

rng = random.Random(1)
c = cg1.structural_constant()
d = cg1.growing_field_count()
print(f"one-way construction: structural count ~ {c:.0f} * n^{d}")
print(" n   structural   reachable (explicit unfold)")
for n in range(2, 5):
    _, reachable = cg1.compile_explicit(cg1.build_cg1(random_1nfa(n, rng=rng)))
    print(f"{n:2} {cg1.structural_bound(n):12} {reachable:11}")

print(f"\ntwo-way construction: structural count grows like n'^{cg2.SIZE_MODEL.degree():.1f}")
machine = cg2.build_cg2(random_2nfa(1, rng=rng))
spec = AnnotationSpec.for_2nfa(machine.source)
words = [annotate(spec, w) for w in words_upto(machine.nfa.alphabet, 3)]
report = cg2.state_space_report(machine, words)
print(f"n' = {report['normalized_n']}: structural {report['structural_bound']}, "
      f"reachable on words up to length 3: {report['reachable']}")
for n in range(3, 6):
    print(f"n' = {n}: structural {cg2.structural_bound(n):.3e}")
