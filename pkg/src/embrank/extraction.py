"""Extracting one pair of bounds from a finite family of coarse moduli.

Functions ``N -> N`` (with ``N = {1, 2, ...}``) are represented by
:class:`SeqFn`: an explicit prefix ``v_1..v_L`` followed by a tail that
repeats a fixed pattern of increments.  A plain affine tail of slope ``a``
is the one-step pattern ``(a,)``.  The class is closed under generalized
inverses, pointwise maxima and running maxima, and eventual domination
between two members is decidable, which is what makes every threshold
below exactly computable.

Given pairs ``(g_i, f_i)`` with every ``g_i`` unbounded,
:func:`extract_equi_moduli` builds

* ``h(n) = 1 + max(n, g_i^v(n), f_i(n))`` over the family,
* ``f = h`` and ``g(n) = max(1, h^v(n) - 1)``,
* per-index thresholds ``n_i`` past which ``g < g_i`` and ``f_i < f``,
* the largest group ``J`` of indices sharing a threshold ``m``, and the
  adjusted ``g'``, ``f'`` bounding every member of ``J`` everywhere.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import accumulate
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

__all__ = [
    "SeqFn",
    "parse_seqfn",
    "inverse_value",
    "generalized_inverse",
    "monotone_envelope",
    "pointwise_max",
    "eventual_dominator",
    "LowerBound",
    "lower_bound_g",
    "eventually_less",
    "leq_everywhere",
    "Extraction",
    "extract_equi_moduli",
    "verify_extraction",
    "seqfn_from_compression",
    "seqfn_from_expansion",
    "compression_from_seqfn",
    "expansion_from_seqfn",
]


def _min_period(steps: Tuple[int, ...]) -> Tuple[int, ...]:
    p = len(steps)
    for d in range(1, p + 1):
        if p % d == 0 and steps == steps[:d] * (p // d):
            return steps[:d]
    return steps


@dataclass(frozen=True)
class SeqFn:
    """Non-decreasing ``N -> N``: ``prefix`` on ``1..L``, then ``steps`` repeated.

    Stored in canonical form (shortest prefix, shortest period), so equal
    functions compare equal.
    """

    prefix: Tuple[int, ...]
    steps: Tuple[int, ...] = (0,)
    _partial: Tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        prefix = tuple(int(v) for v in self.prefix)
        steps = tuple(int(s) for s in self.steps)
        if not prefix:
            raise ValueError("prefix must be non-empty")
        if not steps:
            raise ValueError("steps must be non-empty")
        if prefix[0] < 1:
            raise ValueError("values must be positive integers")
        if any(b < a for a, b in zip(prefix, prefix[1:])):
            raise ValueError(f"prefix {prefix} is not non-decreasing")
        if any(s < 0 for s in steps):
            raise ValueError("tail increments must be non-negative")
        steps = _min_period(steps)
        while len(prefix) >= 2 and prefix[-1] - prefix[-2] == steps[-1]:
            prefix = prefix[:-1]
            steps = steps[-1:] + steps[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "_partial", (0,) + tuple(accumulate(steps)))

    @classmethod
    def affine(cls, prefix: Sequence[int], slope: int) -> "SeqFn":
        return cls(tuple(prefix), (slope,))

    @classmethod
    def from_eventual(cls, fn: Callable[[int], int], start: int, period: int) -> "SeqFn":
        """Sample ``fn`` given that ``fn(n + period) - fn(n)`` is constant for ``n >= start``."""
        start = max(start, 1)
        prefix = [fn(n) for n in range(1, start + 1)]
        tail = [fn(n) for n in range(start, start + period + 1)]
        return cls(tuple(prefix), tuple(b - a for a, b in zip(tail, tail[1:])))

    @property
    def start(self) -> int:
        """Length of the prefix; the tail pattern applies from here on."""
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.steps)

    @property
    def rise(self) -> int:
        """Total increase over one period."""
        return sum(self.steps)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.rise, self.period)

    @property
    def diverging(self) -> bool:
        return self.rise > 0

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"SeqFn is defined on n >= 1, got {n}")
        prefix = self.prefix
        if n <= len(prefix):
            return prefix[n - 1]
        partial = self._partial
        q, r = divmod(n - len(prefix), len(partial) - 1)
        return prefix[-1] + q * partial[-1] + partial[r]

    def shift(self, c: int) -> "SeqFn":
        return SeqFn(tuple(v + c for v in self.prefix), self.steps)

    def __str__(self):
        head = "prefix " + " ".join(map(str, self.prefix))
        if self.period == 1:
            return f"{head} ; slope {self.steps[0]}"
        return f"{head} ; steps " + " ".join(map(str, self.steps))


def parse_seqfn(text: str) -> SeqFn:
    """Parse ``prefix 1 2 5 ; slope 1`` or ``prefix 1 ; steps 0 1``."""
    left, sep, right = text.partition(";")
    lw, rw = left.split(), right.split()
    if not sep or not lw or lw[0] != "prefix" or len(lw) < 2 or len(rw) < 2:
        raise ValueError(f"malformed SeqFn {text!r}")
    try:
        prefix = tuple(int(v) for v in lw[1:])
        nums = tuple(int(v) for v in rw[1:])
    except ValueError:
        raise ValueError(f"malformed SeqFn {text!r}") from None
    if rw[0] == "slope" and len(nums) == 1:
        return SeqFn(prefix, nums)
    if rw[0] == "steps":
        return SeqFn(prefix, nums)
    raise ValueError(f"malformed SeqFn tail in {text!r}")


def _require_diverging(g: SeqFn, what: str = "function"):
    if not g.diverging:
        raise ValueError(f"{what} {g} is bounded, so its generalized inverse does not exist")


def inverse_value(g: SeqFn, k: int) -> int:
    """``min{n >= 1 : g(n) > k}`` for any ``k >= 0``."""
    _require_diverging(g)
    v_last = g.prefix[-1]
    if k < v_last:
        return bisect.bisect_right(g.prefix, k) + 1
    q, r = divmod(k - v_last, g.rise)
    partial = list(accumulate(g.steps))
    j = next(i for i, s in enumerate(partial, 1) if s > r)
    return g.start + q * g.period + j


def generalized_inverse(g: SeqFn) -> SeqFn:
    """``k -> min{n : g(n) > k}`` on ``k >= 1``; see :func:`inverse_value` for ``k = 0``."""
    _require_diverging(g)
    # past the prefix, raising k by one period's rise moves the answer by one period
    return SeqFn.from_eventual(lambda k: inverse_value(g, k), g.prefix[-1], g.rise)


def monotone_envelope(h: Union[SeqFn, Sequence[int]], steps: Sequence[int] = (0,)) -> SeqFn:
    """Running maximum ``n -> max(h(m) for m <= n)``.

    ``h`` may be a :class:`SeqFn` (already monotone, returned as is) or a raw
    prefix that need not be monotone, continued by ``steps``.
    """
    if isinstance(h, SeqFn):
        return h
    raw = tuple(int(v) for v in h)
    steps = tuple(int(s) for s in steps)
    if not raw or not steps or any(s < 0 for s in steps):
        raise ValueError("need a non-empty prefix and non-negative steps")
    run = list(accumulate(raw, max))
    top, last = run[-1], raw[-1]
    rise = sum(steps)
    L = len(raw)

    def raw_at(n):
        q, r = divmod(n - L, len(steps))
        return last + q * rise + sum(steps[:r])

    if last >= top:
        return SeqFn(tuple(run), steps)
    if rise == 0:
        return SeqFn(tuple(run), (0,))
    catch_up = L + len(steps) * -(-(top - last) // rise)
    return SeqFn.from_eventual(
        lambda n: run[n - 1] if n <= L else max(top, raw_at(n)), catch_up, len(steps)
    )


def _lcm(values) -> int:
    return reduce(math.lcm, values, 1)


def pointwise_max(fns: Sequence[SeqFn]) -> SeqFn:
    if not fns:
        raise ValueError("empty family")
    base = max(f.start for f in fns)
    period = _lcm(f.period for f in fns)
    gains = [f.rise * (period // f.period) for f in fns]
    top_gain = max(gains)
    lag = 0
    for c in range(period):
        n0 = base + c
        vals = [f(n0) for f in fns]
        lead = max(v for v, g in zip(vals, gains) if g == top_gain)
        for v, g in zip(vals, gains):
            if g < top_gain and v > lead:
                lag = max(lag, -(-(v - lead) // (top_gain - g)))
    return SeqFn.from_eventual(lambda n: max(f(n) for f in fns), base + lag * period, period)


IDENTITY = SeqFn((1,), (1,))


def eventual_dominator(family: Sequence[SeqFn]) -> SeqFn:
    """``h(n) = 1 + max(n, F_1(n), ..., F_k(n))``.

    Strictly above every member at every ``n`` and unbounded even when the
    members are not.
    """
    if not family:
        raise ValueError("empty family")
    return pointwise_max([IDENTITY, *family]).shift(1)


@dataclass(frozen=True)
class LowerBound:
    g: SeqFn
    threshold: int  # h(h^v(k) - 1) <= k holds for every k >= threshold


def lower_bound_g(h: SeqFn) -> LowerBound:
    """``g(n) = max(1, h^v(n) - 1)`` together with the threshold for ``h(h^v(k) - 1) <= k``."""
    _require_diverging(h)
    hinv = generalized_inverse(h)
    g = SeqFn.from_eventual(
        lambda n: max(1, hinv(n) - 1), max(hinv.start, h(1)), hinv.period
    )
    # h^v(k) >= 2 exactly when k >= h(1); from there h(h^v(k) - 1) <= k by minimality
    return LowerBound(g, h(1))


def eventually_less(u: SeqFn, v: SeqFn) -> Optional[int]:
    """Least ``n0 >= 1`` with ``u(n) < v(n)`` for all ``n >= n0``, or None if there is none."""
    base = max(u.start, v.start)
    period = _lcm([u.period, v.period])
    gap_gain = v.rise * (period // v.period) - u.rise * (period // u.period)
    last_bad = 0
    for c in range(period):
        n0 = base + c
        d0 = v(n0) - u(n0)
        if d0 > 0 and gap_gain >= 0:
            continue
        if gap_gain <= 0:
            return None
        last_bad = max(last_bad, n0 + (-d0 // gap_gain) * period)
    for n in range(base - 1, 0, -1):
        if n <= last_bad:
            break
        if v(n) <= u(n):
            last_bad = n
            break
    return last_bad + 1


def leq_everywhere(u: SeqFn, v: SeqFn) -> bool:
    """``u(n) <= v(n)`` for every ``n >= 1``."""
    return eventually_less(u, v.shift(1)) == 1


@dataclass(frozen=True)
class Extraction:
    h: SeqFn
    g: SeqFn
    f: SeqFn
    g_adjusted: SeqFn
    f_adjusted: SeqFn
    members: Tuple[int, ...]  # J, as 0-based indices into the input family
    threshold: int  # m
    thresholds: Tuple[int, ...]  # n_i for every index


def extract_equi_moduli(pairs: Sequence[Tuple[SeqFn, SeqFn]]) -> Extraction:
    if not pairs:
        raise ValueError("empty family")
    for i, (g_i, _) in enumerate(pairs):
        if not g_i.diverging:
            raise ValueError(f"lower function {i} ({g_i}) is bounded; the family is not coarse")
    h = eventual_dominator([generalized_inverse(g_i) for g_i, _ in pairs] + [f_i for _, f_i in pairs])
    f = h
    g = lower_bound_g(h).g
    thresholds = []
    for i, (g_i, f_i) in enumerate(pairs):
        below, above = eventually_less(g, g_i), eventually_less(f_i, f)
        if below is None or above is None:
            raise AssertionError(f"construction failed to dominate member {i}")
        thresholds.append(max(below, above))
    groups: Dict[int, List[int]] = {}
    for i, t in enumerate(thresholds):
        groups.setdefault(t, []).append(i)
    m = min(groups, key=lambda t: (-len(groups[t]), t))
    f_adj = pointwise_max([f, SeqFn((f(m),), (0,))])
    g_adj = SeqFn.from_eventual(lambda n: 1 if n < m else g(n), max(g.start, m), g.period)
    return Extraction(h, g, f, g_adj, f_adj, tuple(groups[m]), m, tuple(thresholds))


def verify_extraction(result: Extraction, pairs: Sequence[Tuple[SeqFn, SeqFn]]) -> bool:
    """Decide ``g' <= g_i`` and ``f_i <= f'`` everywhere for every member of J."""
    return all(
        leq_everywhere(result.g_adjusted, pairs[i][0]) and leq_everywhere(pairs[i][1], result.f_adjusted)
        for i in result.members
    )


def seqfn_from_compression(kappa, tail_slope: int = 1) -> SeqFn:
    """``n -> floor(kappa(n) + 1)`` on the integer codes of the window, continued affinely.

    The window says nothing beyond its last code, so the caller chooses how
    the tail grows.
    """
    return _from_modulus(kappa, tail_slope)


def seqfn_from_expansion(omega, tail_slope: int = 1) -> SeqFn:
    """``n -> floor(omega(n) + 1)``, continued affinely past the window."""
    return _from_modulus(omega, tail_slope)


def _from_modulus(mod, tail_slope: int) -> SeqFn:
    values = []
    for n in range(1, mod.window + 1):
        v = mod.table[n]
        if v == math.inf:
            raise ValueError(f"modulus is infinite at {n}")
        values.append(math.floor(v + 1))
    return SeqFn.affine(values, tail_slope)


def compression_from_seqfn(g: SeqFn, window: int):
    """``t -> g(floor t) - 1`` for ``t >= 1`` and ``0`` below 1, on a grid window."""
    from .moduli import Modulus, grid_codes

    table = {c: Fraction(g(c) - 1) if c > 0 else Fraction(0) for c in grid_codes(window)}
    return Modulus(window, table, tail="diverges" if g.diverging else "bounded")


def expansion_from_seqfn(f: SeqFn, window: int):
    """``t -> f(ceil t)`` for ``t >= 1`` and ``f(1)`` below 1, on a grid window."""
    from .moduli import Modulus, grid_codes

    table = {c: Fraction(f(c)) if c > 0 else Fraction(f(1)) for c in grid_codes(window)}
    return Modulus(window, table, tail="diverges" if f.diverging else "bounded", head="positive")
