"""Deciding a one-way NFA language from both sides.

A1 accepts the words ending in ``a``.  The two-way machine built from it
reads a word together with an annotation track and halts in an accepting
state on members, in a rejecting state on non-members, and in neither when
the annotation is wrong.
"""

from twowaycg import AnnotationSpec, annotate, build_cg1, decide, fixture_a1
from twowaycg.core import format_annotated

a1 = fixture_a1()
machine = build_cg1(a1)
spec = AnnotationSpec.for_1nfa(a1)

print("word     annotated input          verdict")
for word in ["", "a", "b", "ab", "ba", "aab", "abba", "babaa"]:
    x = annotate(spec, word)
    out = decide(machine, x)
    verdict = "accept" if out.accept_path else "reject" if out.reject_path else "neither"
    print(f"{word or '(empty)':8} {format_annotated(x):24} {verdict}")

# The annotation of each full block of n=2 cells lists the reachable states
# after that block.  Flip one bit and neither verdict is reachable any more.
x = annotate(spec, "abba")
broken = x[:1] + ((x[1][0], 1 - x[1][1]),) + x[2:]
out = decide(machine, broken)
print(f"\nflipped bit: {format_annotated(broken)} -> accept={out.accept_path} reject={out.reject_path}")

# Without the annotation check some wrong tracks get accepted.
loose = build_cg1(a1, check_annotation=False)
out = decide(loose, broken)
print(f"same input, check disabled -> accept={out.accept_path} reject={out.reject_path}")
