"""Extension-tree searches for embeddings with prescribed moduli.

For fixed moduli ``(kappa, omega)``, a node of the extension tree is an
assignment of the first ``k`` points of ``X`` into ``E`` satisfying the
sandwich inequality on all pairs; its children extend it by one point.  The
longest branch from the empty assignment is the depth reported by
:func:`extension_search`.

The lattice variant works with nodes ``(A, phi)`` where ``A`` is a finite
support and ``phi`` a table on integer vectors, ordered by end-extension of
``A``.  :func:`rank_lower_bound_certificate` maps the truncated Schreier
relation into these nodes and checks that the map is monotone, which bounds
the Schreier rank by the rank of the node relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .moduli import (
    FiniteMetricSpace,
    Modulus,
    grid_round_down,
    grid_round_up,
    sandwich_pair,
)
from .ordinal import OrdinalLike
from .schreier import FinSet, enumerate_truncated, finset, prec_star, truncated_relation
from .wellfounded import BudgetExceeded, from_pairs, monotone_map_verify, rank
from .zschreier import LatticeVector, c0_distance, lattice_points

__all__ = [
    "ExtensionNode",
    "SearchResult",
    "extension_search",
    "embeds_at_scale",
    "ThetaNode",
    "ThetaResult",
    "theta_check",
    "theta_precedes",
    "Certificate",
    "rank_lower_bound_certificate",
]


@dataclass(frozen=True)
class ExtensionNode:
    depth: int
    assignment: Tuple[int, ...]  # E indices of the images of x_1..x_depth

    def labels(self, e: FiniteMetricSpace) -> Tuple[str, ...]:
        return tuple(e.labels[i] for i in self.assignment)


@dataclass(frozen=True)
class SearchResult:
    max_depth: int
    witness: ExtensionNode
    exhausted: bool  # True when the node budget ran out; max_depth is then a lower bound
    nodes_visited: int


def _bounds(x: FiniteMetricSpace, kappa: Modulus, omega: Modulus):
    n = len(x)
    lo = [[None] * n for _ in range(n)]
    hi = [[None] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        d = x.dist[i][j]
        lo[i][j] = lo[j][i] = kappa.at(grid_round_down(d))
        hi[i][j] = hi[j][i] = omega.at(grid_round_up(d))
    return lo, hi


def extension_search(
    x: FiniteMetricSpace,
    e: FiniteMetricSpace,
    kappa: Modulus,
    omega: Modulus,
    budget: int = 1_000_000,
) -> SearchResult:
    """Depth-first search of the extension tree, trying E points in index order.

    Every X distance must round into both windows; this is checked before
    searching so that window errors do not depend on the search path.
    The witness is the first assignment, in depth-first order, reaching the
    maximal depth.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    n, m = len(x), len(e)
    lo, hi = _bounds(x, kappa, omega)
    best: Tuple[int, ...] = ()
    visited = 0
    exhausted = False

    def fits(prefix, k, cand):
        for i, img in enumerate(prefix):
            de = e.dist[img][cand]
            if de < lo[i][k] or de > hi[i][k]:
                return False
        return True

    def dfs(prefix) -> bool:
        # returns True when the search must stop
        nonlocal visited, best, exhausted
        visited += 1
        if len(prefix) > len(best):
            best = prefix
            if len(best) == n:
                return True
        k = len(prefix)
        if k == n:
            return False
        for cand in range(m):
            if fits(prefix, k, cand):
                if visited >= budget:
                    exhausted = True
                    return True
                if dfs(prefix + (cand,)):
                    return True
        return False

    dfs(())
    return SearchResult(len(best), ExtensionNode(len(best), best), exhausted, visited)


def embeds_at_scale(
    x: FiniteMetricSpace,
    e: FiniteMetricSpace,
    kappa: Modulus,
    omega: Modulus,
    budget: int = 1_000_000,
) -> bool:
    """Is there an assignment of all of X into E obeying the moduli?

    Raises :class:`BudgetExceeded` when the budget runs out before the
    question is settled.
    """
    res = extension_search(x, e, kappa, omega, budget)
    if res.max_depth == len(x):
        return True
    if res.exhausted:
        raise BudgetExceeded(
            f"search stopped after {res.nodes_visited} nodes at depth {res.max_depth} of {len(x)}"
        )
    return False


@dataclass(frozen=True)
class ThetaNode:
    """A finite support ``A`` together with a table on integer vectors.

    Only the truncated lattice ``{sum t_i e_i : i in A, |t_i| <= bound}``
    is constrained by the node.
    """

    support: FinSet
    assignment: Tuple[Tuple[LatticeVector, str], ...]
    bound: int

    @classmethod
    def build(cls, support, table: Mapping[LatticeVector, str], bound: int) -> "ThetaNode":
        return cls(finset(support), tuple(sorted(table.items(), key=lambda kv: kv[0].coeffs)), bound)

    def table(self) -> Dict[LatticeVector, str]:
        return dict(self.assignment)

    def lattice(self) -> List[LatticeVector]:
        return lattice_points(self.support, self.bound)


@dataclass(frozen=True)
class ThetaResult:
    ok: bool
    pair: Optional[Tuple[LatticeVector, LatticeVector]] = None
    side: Optional[str] = None

    def __bool__(self):
        return self.ok


def theta_check(
    node: ThetaNode,
    e: FiniteMetricSpace,
    kappa: Modulus,
    omega: Modulus,
    _cache: Optional[Dict] = None,
) -> ThetaResult:
    """Sandwich inequality on all distinct pairs of the node's truncated lattice (sup metric).

    Only the c_0 unit vector basis is supported.  A passing check speaks
    for coefficient scale ``node.bound`` only.
    """
    table = node.table()
    pts = node.lattice()
    missing = [p for p in pts if p not in table]
    if missing:
        raise ValueError(f"assignment undefined on lattice point {missing[0]}")
    for u, v in itertools.combinations(pts, 2):
        key = (u, v)
        if _cache is not None and key in _cache:
            bad = _cache[key]
        else:
            bad = sandwich_pair(kappa, omega, c0_distance(u, v), e.d(table[u], table[v]))
            if _cache is not None:
                _cache[key] = bad
        if bad:
            return ThetaResult(False, (u, v), bad[0])
    return ThetaResult(True)


def theta_precedes(a: ThetaNode, b: ThetaNode) -> bool:
    """``a < b``: supports end-extend and the tables agree on the lattice of ``b``."""
    if a.bound != b.bound or not prec_star(a.support, b.support):
        return False
    ta, tb = a.table(), b.table()
    return all(ta.get(p) == tb.get(p) for p in b.lattice())


@dataclass(frozen=True)
class Certificate:
    verified: bool
    certified_rank: Optional[int]
    monotone: bool
    failed_support: Optional[FinSet] = None
    failure: Optional[ThetaResult] = None


def rank_lower_bound_certificate(
    alpha: OrdinalLike,
    n: int,
    bound: int,
    phi: Mapping[LatticeVector, str],
    e: FiniteMetricSpace,
    kappa: Modulus,
    omega: Modulus,
) -> Certificate:
    """Certify that the truncated Schreier rank is a lower bound for the node relation.

    Every ``A`` in S_alpha inside ``{1..n}`` is sent to ``ThetaNode(A, phi)``;
    each node must pass :func:`theta_check`, and the map must send every
    Schreier edge to a node-relation edge.  The certified rank is the rank of
    the truncated Schreier relation.
    """
    sets = enumerate_truncated(alpha, n)
    cache: Dict = {}
    nodes = {}
    for a in sets:
        node = ThetaNode.build(a, phi, bound)
        res = theta_check(node, e, kappa, omega, cache)
        if not res:
            return Certificate(False, None, False, a, res)
        nodes[a] = node
    schreier_rel = truncated_relation(alpha, n)
    image_rel = from_pairs(list(dict.fromkeys(nodes.values())), theta_precedes)
    monotone = monotone_map_verify(nodes, schreier_rel, image_rel)
    return Certificate(monotone, rank(schreier_rel) if monotone else None, monotone)
