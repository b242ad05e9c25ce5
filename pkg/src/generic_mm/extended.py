"""Extended-real sentinels.

Functionals such as the dual dissipation potential or the incremental
functional take the value ``+inf`` off their effective domain.  Those values
are returned as members of :class:`Unbounded` instead of ``float('inf')`` so
that they never leak into floating-point arithmetic; callers compare against
them explicitly.
"""

from __future__ import annotations

import enum
import math
from typing import Union


class Unbounded(enum.Enum):
    POS = 1
    NEG = -1

    def __float__(self) -> float:
        return math.inf if self is Unbounded.POS else -math.inf

    def __repr__(self) -> str:
        return "+inf" if self is Unbounded.POS else "-inf"

    __str__ = __repr__


POS_INF = Unbounded.POS
NEG_INF = Unbounded.NEG

ExtendedReal = Union[float, Unbounded]


def is_unbounded(value) -> bool:
    return isinstance(value, Unbounded)


def to_float(value: ExtendedReal) -> float:
    """Convert for export (CSV, printing); never use the result in sums."""
    return float(value)
