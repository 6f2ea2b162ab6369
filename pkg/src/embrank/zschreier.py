"""Integer lattice points supported on Schreier sets, with the c_0 sup metric.

Every enumeration is truncated twice: supports live in ``{1..N}`` and
coefficients in ``[-C, C]``.  Vectors store only their nonzero coefficients,
so "support in S_alpha" and "written over a set in S_alpha" coincide.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .moduli import FiniteMetricSpace
from .ordinal import OrdinalLike
from .schreier import FinSet, enumerate_truncated, member

__all__ = [
    "LatticeVector",
    "c0_distance",
    "enumerate_points",
    "lattice_points",
    "IsometryReport",
    "subsequence_isometry_check",
    "integer_net_round",
    "sup_distance",
    "to_metric_space",
]


@dataclass(frozen=True)
class LatticeVector:
    coeffs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        items = tuple(sorted((int(i), int(t)) for i, t in self.coeffs))
        for k, (i, t) in enumerate(items):
            if i < 1:
                raise ValueError(f"basis indices start at 1, got {i}")
            if t == 0:
                raise ValueError("zero coefficients are not stored")
            if k and items[k - 1][0] == i:
                raise ValueError(f"index {i} repeated")
        object.__setattr__(self, "coeffs", items)

    @classmethod
    def from_dict(cls, d: Mapping[int, int]) -> "LatticeVector":
        return cls(tuple((i, t) for i, t in d.items() if t != 0))

    @property
    def support(self) -> FinSet:
        return tuple(i for i, _ in self.coeffs)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.coeffs)

    def __neg__(self):
        return LatticeVector(tuple((i, -t) for i, t in self.coeffs))

    def relabel(self, indices: Sequence[int]) -> "LatticeVector":
        """Image under ``e_k -> e_{indices[k-1]}``."""
        return LatticeVector(tuple((indices[i - 1], t) for i, t in self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " ".join(f"{i}:{t}" for i, t in self.coeffs)

    @classmethod
    def parse(cls, text: str) -> "LatticeVector":
        text = text.strip()
        if text == "0":
            return cls()
        out = []
        prev = 0
        for chunk in text.split():
            i, sep, t = chunk.partition(":")
            if not sep:
                raise ValueError(f"malformed vector term {chunk!r}")
            i, t = int(i), int(t)
            if i <= prev:
                raise ValueError(f"vector indices must be strictly increasing in {text!r}")
            prev = i
            out.append((i, t))
        return cls(tuple(out))


def c0_distance(u: LatticeVector, v: LatticeVector) -> int:
    du, dv = u.as_dict(), v.as_dict()
    return max((abs(du.get(i, 0) - dv.get(i, 0)) for i in du.keys() | dv.keys()), default=0)


def lattice_points(support: Iterable[int], bound: int, include_zero_coeffs: bool = True) -> List[LatticeVector]:
    """All vectors over ``support`` with coefficients in ``[-bound, bound]``.

    With ``include_zero_coeffs`` this is the full truncated submodule on the
    support; otherwise only vectors whose support is exactly ``support``.
    """
    support = tuple(support)
    if include_zero_coeffs:
        values = range(-bound, bound + 1)
    else:
        values = [t for t in range(-bound, bound + 1) if t]
    return [
        LatticeVector(tuple((i, t) for i, t in zip(support, ts) if t))
        for ts in itertools.product(values, repeat=len(support))
    ]


def enumerate_points(alpha: OrdinalLike, n: int, bound: int) -> List[LatticeVector]:
    """Vectors with support in S_alpha inside ``{1..n}`` and nonzero coefficients in ``[-bound, bound]``.

    Ordered by support (in :func:`enumerate_truncated` order) and then by
    coefficients lexicographically.  There are ``sum((2 * bound) ** |A|)`` of them.
    """
    if bound < 1:
        raise ValueError("coefficient bound must be >= 1")
    out = []
    for a in enumerate_truncated(alpha, n):
        out.extend(lattice_points(a, bound, include_zero_coeffs=False))
    return out


@dataclass(frozen=True)
class IsometryReport:
    ok: bool
    pairs_checked: int
    escaped: Tuple[FinSet, ...] = ()
    bad_pair: Optional[Tuple[LatticeVector, LatticeVector]] = None

    def __bool__(self):
        return self.ok


def subsequence_isometry_check(indices: Sequence[int], alpha: OrdinalLike, n: int, bound: int) -> IsometryReport:
    """Check that ``e_k -> e_{indices[k-1]}`` preserves the sup distance on the truncated point set.

    The source points are ``enumerate_points(alpha, len(indices), bound)``.
    Supports that leave S_alpha after relabelling are reported in
    ``escaped`` (the spreading property says there are none) and their pairs
    skipped.
    """
    indices = tuple(indices)
    if any(b <= a for a, b in zip(indices, indices[1:])) or (indices and indices[0] < 1):
        raise ValueError("indices must be strictly increasing positive integers")
    m = len(indices)
    if m > n or (indices and indices[-1] > n):
        raise ValueError(f"relabelled indices leave the window {{1..{n}}}")
    if m == 0:
        return IsometryReport(True, 0)
    points = enumerate_points(alpha, m, bound)
    images = [p.relabel(indices) for p in points]
    escaped = sorted({q.support for q in images if not member(q.support, alpha)})
    keep = [(p, q) for p, q in zip(points, images) if member(q.support, alpha)]
    checked = 0
    for (p1, q1), (p2, q2) in itertools.combinations(keep, 2):
        checked += 1
        if c0_distance(p1, p2) != c0_distance(q1, q2):
            return IsometryReport(False, checked, tuple(escaped), (p1, p2))
    return IsometryReport(not escaped, checked, tuple(escaped))


def _nearest(x: Fraction) -> int:
    # nearest integer, ties toward zero
    a = abs(x)
    r = math.floor(a)
    if a - r > Fraction(1, 2):
        r += 1
    return r if x >= 0 else -r


def integer_net_round(q: Mapping[int, Fraction]) -> LatticeVector:
    """Coordinatewise nearest lattice vector; the sup distance to ``q`` is at most 1/2."""
    for v in q.values():
        if isinstance(v, float):
            raise TypeError("pass exact rationals (Fraction or int)")
    return LatticeVector.from_dict({i: _nearest(Fraction(v)) for i, v in q.items()})


def sup_distance(q: Mapping[int, Fraction], v: LatticeVector) -> Fraction:
    """Sup distance between a finitely supported rational vector and a lattice vector."""
    dv = v.as_dict()
    return max(
        (abs(Fraction(q.get(i, 0)) - dv.get(i, 0)) for i in q.keys() | dv.keys()),
        default=Fraction(0),
    )


def to_metric_space(points: Sequence[LatticeVector]) -> FiniteMetricSpace:
    """Finite metric space on ``points`` labelled by their text form, with the sup metric."""
    return FiniteMetricSpace.from_function(
        [str(p) for p in points], lambda i, j: c0_distance(points[i], points[j])
    )
