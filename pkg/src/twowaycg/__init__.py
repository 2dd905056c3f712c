"""Two-way machines that decide the complement of a one-way or two-way NFA
language over annotated inputs, with exact oracles to check them against."""

from .annot import AnnotationSpec, annotate, is_well_annotated
from .cg1 import build_cg1
from .cg2 import build_cg2
from .core import (
    FormatError,
    OneWayNfa,
    TwoWayNfa,
    fixture_a1,
    fixture_a2,
    load,
    parse,
    serialize,
)
from .engine import decide, unfold
from .verify import check_property_d, oracle_membership

__all__ = [
    "AnnotationSpec",
    "FormatError",
    "OneWayNfa",
    "TwoWayNfa",
    "annotate",
    "build_cg1",
    "build_cg2",
    "check_property_d",
    "decide",
    "fixture_a1",
    "fixture_a2",
    "is_well_annotated",
    "load",
    "oracle_membership",
    "parse",
    "serialize",
    "unfold",
]
