"""Compression and expansion moduli on the scale grid.

The grid is ``{..., 1/3, 1/2, 1, 2, 3, ...}``.  A grid point is addressed by
a nonzero integer code ``i``: value ``i`` when ``i >= 1`` and ``1/(1 - i)``
when ``i <= -1``, so code order agrees with value order.  A :class:`Modulus`
is a non-decreasing table over the codes ``-M..-1, 1..M`` with values in
the non-negative rationals plus infinity.

All arithmetic is exact.  ``math.inf`` is the only float that appears, as
the infinite value of a modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

__all__ = [
    "INF",
    "GridPoint",
    "Modulus",
    "FiniteMetricSpace",
    "MetricError",
    "DiagonalError",
    "SymmetryError",
    "TriangleError",
    "WindowError",
    "SandwichResult",
    "Verdict",
    "grid_codes",
    "grid_round_down",
    "grid_round_up",
    "grid_identity",
    "compression",
    "expansion",
    "sandwich_check",
    "classify",
    "covering_window",
]

INF = math.inf
Value = Union[Fraction, float]  # float only ever as INF

TAIL_FLAGS = ("diverges", "bounded", "unspecified")
HEAD_FLAGS = ("vanishes", "positive", "unspecified")


class WindowError(ValueError):
    """A rounded distance fell outside a modulus window."""


class MetricError(ValueError):
    """Invalid distance data; ``pair`` holds the offending index pair when known."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class DiagonalError(MetricError):
    pass


class SymmetryError(MetricError):
    pass


class TriangleError(MetricError):
    pass


@dataclass(frozen=True, order=True)
class GridPoint:
    code: int

    def __post_init__(self):
        if not isinstance(self.code, int) or self.code == 0:
            raise ValueError("grid codes are nonzero integers")

    @property
    def value(self) -> Fraction:
        return Fraction(self.code) if self.code > 0 else Fraction(1, 1 - self.code)

    @classmethod
    def from_value(cls, value) -> "GridPoint":
        v = Fraction(value)
        if v >= 1 and v.denominator == 1:
            return cls(v.numerator)
        if 0 < v < 1 and v.numerator == 1:
            return cls(1 - v.denominator)
        raise ValueError(f"{v} is not a grid point")

    def __str__(self):
        return _fmt(self.value)


def grid_codes(window: int) -> List[int]:
    if window < 1:
        raise ValueError("window must be >= 1")
    return list(range(-window, 0)) + list(range(1, window + 1))


def _positive(t) -> Fraction:
    t = Fraction(t)
    if t <= 0:
        raise ValueError(f"grid rounding needs t > 0, got {t}")
    return t


def grid_round_down(t) -> GridPoint:
    """Largest grid point <= t."""
    t = _positive(t)
    if t >= 1:
        return GridPoint(math.floor(t))
    return GridPoint(1 - math.ceil(1 / t))


def grid_round_up(t) -> GridPoint:
    """Smallest grid point >= t."""
    t = _positive(t)
    if t >= 1:
        return GridPoint(math.ceil(t))
    k = math.floor(1 / t)
    return GridPoint(1 if k == 1 else 1 - k)


def _fmt(v: Value) -> str:
    if v == INF:
        return "inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _as_value(v) -> Value:
    if v == INF:
        return INF
    if isinstance(v, float):
        raise TypeError("moduli hold exact rationals; floats are not accepted")
    v = Fraction(v)
    if v < 0:
        raise ValueError(f"modulus values are non-negative, got {v}")
    return v


@dataclass(frozen=True)
class Modulus:
    """A non-decreasing table over grid codes ``-window..-1, 1..window``.

    ``tail`` records the intended behaviour as r -> infinity and ``head`` as
    r -> 0; neither can be decided from the window, so they are declared.
    """

    window: int
    table: Mapping[int, Value]
    tail: str = "unspecified"
    head: str = "unspecified"

    def __post_init__(self):
        codes = grid_codes(self.window)
        if set(self.table) != set(codes):
            missing = sorted(set(codes) - set(self.table))
            extra = sorted(set(self.table) - set(codes))
            raise ValueError(f"table codes do not match window: missing {missing}, extra {extra}")
        table = {c: _as_value(self.table[c]) for c in codes}
        object.__setattr__(self, "table", table)
        for a, b in zip(codes, codes[1:]):
            if table[b] < table[a]:
                raise ValueError(f"modulus decreases between codes {a} and {b}")
        if self.tail not in TAIL_FLAGS:
            raise ValueError(f"unknown tail flag {self.tail!r}")
        if self.head not in HEAD_FLAGS:
            raise ValueError(f"unknown head flag {self.head!r}")
        if self.head == "vanishes" and table[-self.window] == INF:
            raise ValueError("head flag 'vanishes' contradicts an infinite value at the smallest scale")
        if self.tail == "bounded" and table[self.window] == INF:
            raise ValueError("tail flag 'bounded' contradicts an infinite value at the largest scale")

    @classmethod
    def from_function(
        cls, window: int, fn: Callable[[Fraction], Value], tail="unspecified", head="unspecified"
    ) -> "Modulus":
        return cls(window, {c: fn(GridPoint(c).value) for c in grid_codes(window)}, tail, head)

    @property
    def codes(self) -> List[int]:
        return grid_codes(self.window)

    def at(self, point: GridPoint) -> Value:
        if not -self.window <= point.code <= self.window:
            raise WindowError(f"scale {point} (code {point.code}) is outside window {self.window}")
        return self.table[point.code]

    def __call__(self, r) -> Value:
        return self.at(r if isinstance(r, GridPoint) else GridPoint.from_value(r))

    def items(self) -> List[Tuple[int, Value]]:
        return [(c, self.table[c]) for c in self.codes]


def grid_identity(window: int, tail="diverges", head="vanishes") -> Modulus:
    return Modulus.from_function(window, lambda r: r, tail, head)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labelled points with an exact distance matrix, validated on construction."""

    labels: Tuple[str, ...]
    dist: Tuple[Tuple[Fraction, ...], ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        dist = tuple(tuple(Fraction(v) for v in row) for row in self.dist)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", dist)
        n = len(labels)
        if n == 0:
            raise MetricError("metric space needs at least one point")
        if len(set(labels)) != n:
            raise MetricError("duplicate point label")
        if len(dist) != n or any(len(row) != n for row in dist):
            raise MetricError("distance matrix shape does not match labels")
        for i in range(n):
            if dist[i][i] != 0:
                raise DiagonalError(f"d({labels[i]},{labels[i]}) = {dist[i][i]} is not 0", (i, i))
        for i, j in combinations(range(n), 2):
            if dist[i][j] != dist[j][i]:
                raise SymmetryError(f"d({labels[i]},{labels[j]}) != d({labels[j]},{labels[i]})", (i, j))
            if dist[i][j] <= 0:
                raise MetricError(f"distinct points {labels[i]}, {labels[j]} at distance {dist[i][j]}", (i, j))
        for i, j in combinations(range(n), 2):
            for k in range(n):
                if dist[i][j] > dist[i][k] + dist[k][j]:
                    raise TriangleError(
                        f"d({labels[i]},{labels[j]}) = {dist[i][j]} exceeds "
                        f"d({labels[i]},{labels[k]}) + d({labels[k]},{labels[j]})",
                        (i, j),
                    )
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(labels)})

    @classmethod
    def from_function(cls, labels: Sequence[str], d: Callable[[int, int], Fraction]) -> "FiniteMetricSpace":
        n = len(labels)
        return cls(tuple(labels), tuple(tuple(Fraction(d(i, j)) if i != j else Fraction(0) for j in range(n)) for i in range(n)))

    def __len__(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"no point labelled {label!r}") from None

    def d(self, x: str, y: str) -> Fraction:
        return self.dist[self.index(x)][self.index(y)]

    def distances(self) -> List[Fraction]:
        n = len(self)
        return [self.dist[i][j] for i, j in combinations(range(n), 2)]


def covering_window(space: FiniteMetricSpace) -> int:
    """Smallest window containing ``d-`` and ``d+`` for every positive distance in ``space``."""
    m = 1
    for d in space.distances():
        m = max(m, abs(grid_round_down(d).code), abs(grid_round_up(d).code))
    return m


def _check_map(phi: Mapping[str, str], x: FiniteMetricSpace, e: FiniteMetricSpace):
    for p in x.labels:
        if p not in phi:
            raise ValueError(f"map is not defined on {p!r}")
        e.index(phi[p])


def compression(phi: Mapping[str, str], x: FiniteMetricSpace, e: FiniteMetricSpace, window: int) -> Modulus:
    """``r -> inf{d_E(phi a, phi b) : d_X(a, b) >= r}`` on the window (inf of nothing is INF)."""
    _check_map(phi, x, e)
    pairs = [(x.d(a, b), e.d(phi[a], phi[b])) for a, b in combinations(x.labels, 2)]
    table = {}
    for c in grid_codes(window):
        r = GridPoint(c).value
        table[c] = min((de for dx, de in pairs if dx >= r), default=INF)
    return Modulus(window, table)


def expansion(phi: Mapping[str, str], x: FiniteMetricSpace, e: FiniteMetricSpace, window: int) -> Modulus:
    """``r -> sup{d_E(phi a, phi b) : d_X(a, b) <= r}`` on the window (sup of nothing is 0)."""
    _check_map(phi, x, e)
    pairs = [(x.d(a, b), e.d(phi[a], phi[b])) for a, b in combinations(x.labels, 2)]
    table = {}
    for c in grid_codes(window):
        r = GridPoint(c).value
        table[c] = max((de for dx, de in pairs if dx <= r), default=Fraction(0))
    return Modulus(window, table)


@dataclass(frozen=True)
class SandwichResult:
    ok: bool
    pair: Optional[Tuple[str, str]] = None
    side: Optional[str] = None  # "lower" or "upper"
    bound: Optional[Value] = None
    image_distance: Optional[Fraction] = None

    def __bool__(self):
        return self.ok


def sandwich_pair(kappa: Modulus, omega: Modulus, dx: Fraction, de: Fraction) -> Optional[Tuple[str, Value]]:
    """Check ``kappa(dx-) <= de <= omega(dx+)``; return the failing side and bound, or None."""
    lo = kappa.at(grid_round_down(dx))
    hi = omega.at(grid_round_up(dx))
    if lo > de:
        return "lower", lo
    if de > hi:
        return "upper", hi
    return None


def sandwich_check(
    phi: Mapping[str, str],
    kappa: Modulus,
    omega: Modulus,
    x: FiniteMetricSpace,
    e: FiniteMetricSpace,
    subset: Optional[Iterable[str]] = None,
) -> SandwichResult:
    """Does ``kappa(d(a,b)-) <= d(phi a, phi b) <= omega(d(a,b)+)`` hold on all pairs of ``subset``?

    Pairs are scanned in label order and the first violation is reported.
    A rounded distance outside either window raises :class:`WindowError`.
    """
    points = list(x.labels if subset is None else subset)
    for p in points:
        x.index(p)
        if p not in phi:
            raise ValueError(f"map is not defined on {p!r}")
    for a, b in combinations(points, 2):
        de = e.d(phi[a], phi[b])
        bad = sandwich_pair(kappa, omega, x.d(a, b), de)
        if bad:
            return SandwichResult(False, (a, b), bad[0], bad[1], de)
    return SandwichResult(True)


@dataclass(frozen=True)
class Verdict:
    status: str  # "consistent", "violated" or "indeterminate"
    witness: Optional[Fraction] = None
    constants: Optional[Tuple[Fraction, Fraction]] = None


def classify(kappa: Modulus, omega: Modulus, family: str) -> Verdict:
    """Three-valued membership of ``(kappa, omega)`` in the coarse, uniform or Lipschitz class.

    Only in-window data can refute membership; confirming it also needs the
    declared tail/head behaviour.
    """
    if kappa.window != omega.window:
        raise ValueError(f"window mismatch: {kappa.window} vs {omega.window}")
    codes = kappa.codes
    inf_omega = next((c for c in codes if omega.table[c] == INF), None)
    zero_kappa = next((c for c in codes if kappa.table[c] == 0), None)

    if family == "coarse":
        if inf_omega is not None:
            return Verdict("violated", GridPoint(inf_omega).value)
        return Verdict("consistent" if kappa.tail == "diverges" else "indeterminate")
    if family == "uniform":
        if zero_kappa is not None:
            return Verdict("violated", GridPoint(zero_kappa).value)
        return Verdict("consistent" if omega.head == "vanishes" else "indeterminate")
    if family == "lipschitz":
        if zero_kappa is not None:
            return Verdict("violated", GridPoint(zero_kappa).value)
        if inf_omega is not None:
            return Verdict("violated", GridPoint(inf_omega).value)
        c = min(kappa.table[k] / GridPoint(k).value for k in codes)
        big_c = max(omega.table[k] / GridPoint(k).value for k in codes)
        if kappa.tail == "diverges" and omega.head == "vanishes":
            return Verdict("consistent", constants=(c, big_c))
        return Verdict("indeterminate", constants=(c, big_c))
    raise ValueError(f"unknown family {family!r}")
