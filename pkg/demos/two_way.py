"""Deciding a two-way NFA language from both sides.

Each block of N = (n+1)^2 annotation bits encodes the left table of the
prefix ending there.  The machine recomputes table sizes cell by cell with a
sliding window two blocks wide, checks every completed block against its
recount, and finally checks whether the accepting state is reachable from
the restart state.
"""

import random
import time

from twowaycg import AnnotationSpec, annotate, build_cg2, decide, oracle_membership
from twowaycg.cg2 import nsimul_t, window_hp
from twowaycg.core import format_annotated
from twowaycg.tables import ltable, with_left_table
from twowaycg.verify import random_2nfa

nfa = random_2nfa(2, rng=random.Random(14))
machine = build_cg2(nfa)
spec = AnnotationSpec.for_2nfa(nfa)
print(f"source: {nfa.n} state(s); normalized n' = {machine.n}, block size N = {machine.block}")

rng = random.Random(0)
for length in (0, 1, 2, 3, 4, 10):
    w = tuple(rng.choice(nfa.alphabet) for _ in range(length))
    x = annotate(spec, w)
    start = time.perf_counter()
    out = decide(machine, x)
    took = time.perf_counter() - start
    print(f"{''.join(w) or '(empty)':10} member={oracle_membership(nfa, w)!s:5} "
          f"accept={out.accept_path!s:5} reject={out.reject_path!s:5} ({took:.2f}s)  {format_annotated(x)}")

# The local simulation from a cell returns the exit states of the current
# block, using the previous block's table in place of everything to its left.
N = machine.block
w = tuple(rng.choice(nfa.alphabet) for _ in range(N + 3))
x = annotate(spec, w)
pos = N + 3
print(f"\nlocal simulation at cell {pos} (hp = {window_hp(machine, pos)}):")
for p in range(machine.n):
    print(f"  from state {p}: exits in {sorted(nsimul_t(machine, x, pos, p))}")
left = ltable(machine.nfa, w[:N])
local = with_left_table(machine.nfa, left)
print(f"  oracle table of the block: {sorted(ltable(local, w[N:]))}")

bad = x[:3] + ((x[3][0], 1 - x[3][1]),) + x[4:]
out = decide(machine, bad)
print(f"\nflipped bit in the first block -> accept={out.accept_path} reject={out.reject_path}")
