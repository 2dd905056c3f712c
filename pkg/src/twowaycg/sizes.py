"""Structural state counts for procedure machines.

A flat state is a stack of frames plus the head bookkeeping.  Its count is
bounded by summing, over every possible stack shape, the product of the
field domains that are live in that shape: all fields of the active (top)
frame, and for each waiting frame only what it keeps that its callee does
not already carry.  Domains are functions of the state count ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

Domain = Callable[[int], int]


@dataclass(frozen=True)
class SizeModel:
    shapes: tuple
    active: Mapping  # frame type -> {field: domain}
    waiting: Mapping  # (caller, callee) -> {field: domain}
    head: Domain

    def terms(self, shape) -> list:
        out = [self.head]
        for caller, callee in zip(shape, shape[1:]):
            out.extend(self.waiting[(caller, callee)].values())
        out.extend(self.active[shape[-1]].values())
        return out

    def bound(self, n) -> int:
        total = 0
        for shape in self.shapes:
            count = 1
            for size in self.terms(shape):
                count *= size(n)
            total += count
        return total

    def degree(self, probe=(64, 128)) -> float:
        """Growth exponent of the largest shape, read off two large ``n``
        (log factors show up as a small excess over an integer)."""
        lo, hi = probe
        return max(
            math.log(self._product(shape, hi) / self._product(shape, lo)) / math.log(hi / lo)
            for shape in self.shapes
        )

    def _product(self, shape, n):
        count = 1
        for size in self.terms(shape):
            count *= size(n)
        return count

    def cardinalities(self, n) -> dict:
        return {
            kind.__name__: {name: size(n) for name, size in fields.items()}
            for kind, fields in self.active.items()
        }


def prefixes(*chains) -> tuple:
    """All nonempty prefixes of the given call chains, deduplicated."""
    seen = {}
    for chain in chains:
        for k in range(1, len(chain) + 1):
            seen[tuple(chain[:k])] = None
    return tuple(seen)
