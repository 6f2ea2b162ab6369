"""Schreier families S_alpha and the end-extension relation on finite sets.

Finite subsets of {1, 2, ...} are handled as strictly increasing tuples of
ints (``FinSet``).  The recursion is

* S_0: sets with at most one element;
* S_(b+1): the empty set, or unions A_1 < ... < A_k of sets in S_b with
  k <= min A_1;
* S_lam (lam a limit): the empty set, or sets in S_(lam_n) for some
  n <= min A, where lam_n is :func:`embrank.ordinal.fundamental_sequence`.

Successor membership peels off the longest initial segment lying in S_b,
which is optimal for any hereditary family.  :func:`member_exhaustive` is an
independent decision procedure over every split and exists to check that.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

from .ordinal import Ordinal, OrdinalLike, classify, fundamental_sequence, _coerce
from .wellfounded import FiniteRelation, LazyRelation

FinSet = Tuple[int, ...]

__all__ = [
    "FinSet",
    "finset",
    "format_finset",
    "parse_finset",
    "member",
    "member_exhaustive",
    "decompose",
    "enumerate_truncated",
    "prec_star",
    "truncated_relation",
]


def finset(elements: Iterable[int]) -> FinSet:
    """Normalize an iterable of distinct positive ints into a sorted tuple."""
    out = tuple(sorted(elements))
    for i, x in enumerate(out):
        if not isinstance(x, int) or x < 1:
            raise ValueError(f"finite sets hold positive integers, got {x!r}")
        if i and out[i - 1] == x:
            raise ValueError(f"duplicate element {x}")
    return out


def format_finset(a: Iterable[int]) -> str:
    return "{" + ",".join(str(x) for x in a) + "}"


_FINSET = re.compile(r"^\s*\{\s*(.*?)\s*\}\s*$")


def parse_finset(text: str) -> FinSet:
    """Parse ``{1,3,7}`` or ``{}``; entries must be strictly increasing."""
    m = _FINSET.match(text)
    if not m:
        raise ValueError(f"malformed set {text!r}")
    body = m.group(1)
    if not body:
        return ()
    try:
        items = [int(x) for x in body.split(",")]
    except ValueError:
        raise ValueError(f"malformed set {text!r}") from None
    if any(b <= a for a, b in zip(items, items[1:])):
        raise ValueError(f"set entries must be strictly increasing: {text!r}")
    return finset(items)


def member(a: Iterable[int], alpha: OrdinalLike) -> bool:
    """Is ``a`` in S_alpha?"""
    return _member(finset(a), _coerce(alpha))


@lru_cache(maxsize=None)
def _member(a: FinSet, alpha: Ordinal) -> bool:
    if len(a) <= 1:
        return True
    kind, pred = classify(alpha)
    if kind == "zero":
        return False
    if kind == "successor":
        return _greedy_blocks(a, pred) is not None
    return any(_member(a, fundamental_sequence(alpha, n)) for n in range(1, a[0] + 1))


def _greedy_blocks(a: FinSet, beta: Ordinal) -> Optional[List[FinSet]]:
    blocks = []
    rest = a
    while rest:
        if len(blocks) == a[0]:
            return None
        # singletons always lie in S_beta, so the peel is never empty
        cut = len(rest)
        while not _member(rest[:cut], beta):
            cut -= 1
        blocks.append(rest[:cut])
        rest = rest[cut:]
    return blocks


def decompose(a: Iterable[int], alpha: OrdinalLike) -> Optional[List[FinSet]]:
    """Witness blocks A_1 < ... < A_k in S_beta for ``a`` in S_(beta+1), or None.

    Blocks are the greedy longest-prefix peels, so they are non-empty and
    k <= min(a).
    """
    a = finset(a)
    alpha = _coerce(alpha)
    kind, pred = classify(alpha)
    if kind != "successor":
        raise ValueError(f"decompose needs a successor ordinal, got {alpha}")
    if not a:
        raise ValueError("decompose needs a non-empty set")
    return _greedy_blocks(a, pred)


def member_exhaustive(a: Iterable[int], alpha: OrdinalLike) -> bool:
    """Membership by trying every split into consecutive blocks (slow oracle)."""
    return _member_exhaustive(finset(a), _coerce(alpha))


@lru_cache(maxsize=None)
def _member_exhaustive(a: FinSet, alpha: Ordinal) -> bool:
    if not a:
        return True
    kind, pred = classify(alpha)
    if kind == "zero":
        return len(a) == 1
    if kind == "limit":
        return any(
            _member_exhaustive(a, fundamental_sequence(alpha, n)) for n in range(1, a[0] + 1)
        )
    n = len(a)
    for k in range(1, min(a[0], n) + 1):
        for cuts in itertools.combinations(range(1, n), k - 1):
            bounds = (0,) + cuts + (n,)
            if all(_member_exhaustive(a[i:j], pred) for i, j in zip(bounds, bounds[1:])):
                return True
    return False


def enumerate_truncated(alpha: OrdinalLike, n: int) -> List[FinSet]:
    """All sets of S_alpha inside {1..n}, ordered by size then lexicographically.

    Built by end-extension from the empty set, which reaches every member
    because S_alpha is hereditary.
    """
    if n < 1:
        raise ValueError("truncation bound must be >= 1")
    alpha = _coerce(alpha)
    found = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for b in frontier:
            start = b[-1] + 1 if b else 1
            for m in range(start, n + 1):
                cand = b + (m,)
                if _member(cand, alpha):
                    nxt.append(cand)
        nxt.sort()
        found.extend(nxt)
        frontier = nxt
    return found


def prec_star(a: Iterable[int], b: Iterable[int]) -> bool:
    """True iff ``a`` is ``b`` with one element larger than ``max(b)`` appended."""
    a, b = finset(a), finset(b)
    return len(a) == len(b) + 1 and a[:-1] == b


def truncated_relation(alpha: OrdinalLike, n: int, budget: int = 1_000_000) -> FiniteRelation:
    """The relation (S_alpha restricted to {1..n}, prec_star) as an explicit finite relation."""
    alpha = _coerce(alpha)

    def children(b: FinSet) -> List[FinSet]:
        start = b[-1] + 1 if b else 1
        return [b + (m,) for m in range(start, n + 1) if _member(b + (m,), alpha)]

    return LazyRelation(roots=lambda: [()], children=children, budget=budget).materialize()
