"""Ranks of well-founded relations, at finite scale.

A relation is given by its nodes and by edges ``(y, x)`` read as ``y < x``.
The rank function is ``rho(x) = max(rho(y) + 1 for y < x)`` (0 on minimal
nodes) and the rank of the relation is ``max(rho) + 1`` (0 when empty).
"""

from __future__ import annotations

import graphlib
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple

__all__ = [
    "BudgetExceeded",
    "IllFoundedError",
    "FiniteRelation",
    "LazyRelation",
    "is_well_founded",
    "rank_values",
    "rank_values_memo",
    "rank",
    "monotone_map_verify",
    "from_pairs",
]


class BudgetExceeded(RuntimeError):
    """A truncation budget was hit before the computation finished."""


class IllFoundedError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteRelation:
    nodes: Tuple[Hashable, ...]
    edges: Tuple[Tuple[Hashable, Hashable], ...] = ()
    _below: Dict[Hashable, List[Hashable]] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        nodes = tuple(self.nodes)
        edges = tuple((y, x) for y, x in self.edges)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node")
        below: Dict[Hashable, List[Hashable]] = {x: [] for x in nodes}
        seen = set()
        for y, x in edges:
            if y not in below or x not in below:
                raise ValueError(f"edge ({y!r}, {x!r}) uses an unknown node")
            if (y, x) in seen:
                raise ValueError(f"duplicate edge ({y!r}, {x!r})")
            seen.add((y, x))
            below[x].append(y)
        object.__setattr__(self, "_below", below)

    def predecessors(self, x) -> List[Hashable]:
        """Nodes ``y`` with ``y < x``."""
        return self._below[x]

    def __len__(self):
        return len(self.nodes)


@dataclass
class LazyRelation:
    """A relation described by root nodes and a rule listing the nodes below ``x``.

    ``materialize`` walks it breadth-first; more than ``budget`` distinct nodes
    raises :class:`BudgetExceeded` rather than returning a partial relation.
    """

    roots: Callable[[], Iterable[Hashable]]
    children: Callable[[Hashable], Iterable[Hashable]]
    budget: int

    def materialize(self) -> FiniteRelation:
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        order: List[Hashable] = []
        seen = set()
        queue = deque()

        def visit(node):
            if node in seen:
                return
            if len(order) >= self.budget:
                raise BudgetExceeded(f"more than {self.budget} nodes")
            seen.add(node)
            order.append(node)
            queue.append(node)

        for r in self.roots():
            visit(r)
        edges = []
        while queue:
            x = queue.popleft()
            for y in self.children(x):
                visit(y)
                edges.append((y, x))
        return FiniteRelation(tuple(order), tuple(edges))


def is_well_founded(rel: FiniteRelation) -> bool:
    # finite relation: an infinite descending sequence exists iff there is a cycle
    sorter = graphlib.TopologicalSorter({x: rel.predecessors(x) for x in rel.nodes})
    try:
        sorter.prepare()
    except graphlib.CycleError:
        return False
    return True


def rank_values(rel: FiniteRelation) -> Dict[Hashable, int]:
    """Rank of every node, by dynamic programming along a topological order."""
    sorter = graphlib.TopologicalSorter({x: rel.predecessors(x) for x in rel.nodes})
    try:
        order = list(sorter.static_order())
    except graphlib.CycleError as exc:
        raise IllFoundedError(f"relation has a cycle through {exc.args[1][0]!r}") from None
    rho: Dict[Hashable, int] = {}
    for x in order:
        rho[x] = max((rho[y] + 1 for y in rel.predecessors(x)), default=0)
    return {x: rho[x] for x in rel.nodes}


def rank_values_memo(rel: FiniteRelation) -> Dict[Hashable, int]:
    """Rank of every node by memoized recursion on the defining equation."""
    rho: Dict[Hashable, int] = {}
    active = set()

    def go(x):
        if x in rho:
            return rho[x]
        if x in active:
            raise IllFoundedError(f"relation has a cycle through {x!r}")
        active.add(x)
        rho[x] = max((go(y) + 1 for y in rel.predecessors(x)), default=0)
        active.discard(x)
        return rho[x]

    for x in rel.nodes:
        go(x)
    return {x: rho[x] for x in rel.nodes}


def rank(rel: FiniteRelation) -> int:
    return max(rank_values(rel).values(), default=-1) + 1


def monotone_map_verify(
    f: Mapping[Hashable, Hashable], rel1: FiniteRelation, rel2: FiniteRelation
) -> bool:
    """True iff ``y <1 x`` implies ``f(y) <2 f(x)`` for every edge of ``rel1``."""
    targets = set(rel2.nodes)
    for x in rel1.nodes:
        if x not in f:
            raise ValueError(f"map is not defined on {x!r}")
        if f[x] not in targets:
            raise ValueError(f"image of {x!r} is not a node of the target relation")
    edges2 = set(rel2.edges)
    return all((f[y], f[x]) in edges2 for y, x in rel1.edges)


def from_pairs(nodes: Sequence[Hashable], below: Callable[[Hashable, Hashable], bool]) -> FiniteRelation:
    """Explicit relation on ``nodes`` with ``y < x`` whenever ``below(y, x)``."""
    return FiniteRelation(
        tuple(nodes), tuple((y, x) for x in nodes for y in nodes if below(y, x))
    )
