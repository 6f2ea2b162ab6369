"""Line-oriented text formats for instance files.

Blank lines and lines starting with ``#`` are ignored everywhere.  Every
``format_*`` function produces text that its ``parse_*`` counterpart reads
back to an equal value.

Metric space::

    points 3
    a
    b
    c
    1 2 1
    2 3 2
    1 3 3

(one label per line, then ``i j p/q`` with 1-based indices).

Modulus::

    window 2
    tail diverges
    head vanishes
    -2 1/3
    -1 1/2
    1 1
    2 inf

Relation: ``node x`` and ``edge y x`` (meaning ``y < x``) lines.
Map: ``source target`` lines, or ``source -> target`` when labels contain spaces.
Family: one ``<g> | <f>`` pair of SeqFn texts per line.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .extraction import SeqFn, parse_seqfn
from .moduli import (
    INF,
    HEAD_FLAGS,
    TAIL_FLAGS,
    DiagonalError,
    FiniteMetricSpace,
    MetricError,
    Modulus,
    SymmetryError,
    TriangleError,
    _fmt,
    grid_codes,
)
from .wellfounded import FiniteRelation

__all__ = [
    "ParseError",
    "format_rational",
    "parse_rational",
    "parse_metric_space",
    "format_metric_space",
    "parse_modulus",
    "format_modulus",
    "parse_relation",
    "format_relation",
    "parse_map",
    "format_map",
    "parse_family",
    "format_family",
]


class ParseError(ValueError):
    def __init__(self, message, line: Optional[int] = None, kind: str = "parse"):
        self.line = line
        self.kind = kind
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def format_rational(v) -> str:
    return _fmt(v)


def parse_rational(token: str, line: Optional[int] = None, allow_inf: bool = False):
    if allow_inf and token == "inf":
        return INF
    try:
        if "." in token or "e" in token.lower():
            raise ValueError
        v = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed rational {token!r}", line, "rational") from None
    return v


def parse_metric_space(text: str) -> FiniteMetricSpace:
    rows = list(_lines(text))
    if not rows:
        raise ParseError("empty metric space file")
    no, head = rows[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "points" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError("expected 'points n' with n >= 1", no)
    n = int(parts[1])
    if len(rows) < 1 + n:
        raise ParseError(f"expected {n} label lines", rows[-1][0])
    labels = [label for _, label in rows[1 : 1 + n]]
    dist: List[List[Optional[Fraction]]] = [[None] * n for _ in range(n)]
    where: Dict[Tuple[int, int], int] = {}
    for no, line in rows[1 + n :]:
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("expected 'i j p/q'", no)
        try:
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
        except ValueError:
            raise ParseError("point indices must be integers", no) from None
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"point index out of range 1..{n}", no)
        d = parse_rational(parts[2], no)
        if i == j:
            if d != 0:
                raise ParseError(f"d({labels[i]},{labels[i]}) = {d} is not 0", no, "diagonal")
            continue
        a, b = min(i, j), max(i, j)
        if dist[a][b] is not None:
            if dist[a][b] != d:
                raise ParseError(
                    f"d({labels[a]},{labels[b]}) given as both {dist[a][b]} and {d}", no, "symmetry"
                )
            raise ParseError(f"pair ({labels[a]},{labels[b]}) given twice", no)
        dist[a][b] = dist[b][a] = d
        where[(a, b)] = no
    for i in range(n):
        dist[i][i] = Fraction(0)
        for j in range(i + 1, n):
            if dist[i][j] is None:
                raise ParseError(f"missing distance for ({labels[i]},{labels[j]})")
    try:
        return FiniteMetricSpace(tuple(labels), tuple(tuple(r) for r in dist))
    except MetricError as exc:
        kind = {DiagonalError: "diagonal", SymmetryError: "symmetry", TriangleError: "triangle"}.get(
            type(exc), "metric"
        )
        line = where.get(tuple(sorted(exc.pair))) if exc.pair else None
        raise ParseError(str(exc), line, kind) from None


def format_metric_space(space: FiniteMetricSpace) -> str:
    n = len(space)
    out = [f"points {n}", *space.labels]
    for i in range(n):
        for j in range(i + 1, n):
            out.append(f"{i + 1} {j + 1} {format_rational(space.dist[i][j])}")
    return "\n".join(out) + "\n"


def parse_modulus(text: str) -> Modulus:
    header: Dict[str, Tuple[str, int]] = {}
    table = {}
    where = {}
    for no, line in _lines(text):
        parts = line.split()
        if parts[0] in ("window", "tail", "head"):
            if len(parts) != 2:
                raise ParseError(f"expected '{parts[0]} <value>'", no)
            if parts[0] in header:
                raise ParseError(f"repeated '{parts[0]}' line", no)
            header[parts[0]] = (parts[1], no)
            continue
        if len(parts) != 2:
            raise ParseError("expected 'code value'", no)
        try:
            code = int(parts[0])
        except ValueError:
            raise ParseError(f"malformed grid code {parts[0]!r}", no) from None
        if code == 0:
            raise ParseError("grid code 0 does not exist", no, "code")
        if code in table:
            raise ParseError(f"code {code} given twice", no)
        v = parse_rational(parts[1], no, allow_inf=True)
        if v != INF and v < 0:
            raise ParseError(f"negative modulus value {v}", no)
        table[code] = v
        where[code] = no
    if "window" not in header:
        raise ParseError("missing 'window M' line")
    wtext, wline = header["window"]
    if not wtext.isdigit() or int(wtext) < 1:
        raise ParseError("window must be a positive integer", wline)
    window = int(wtext)
    tail, tline = header.get("tail", ("unspecified", None))
    head, hline = header.get("head", ("unspecified", None))
    if tail not in TAIL_FLAGS:
        raise ParseError(f"unknown tail flag {tail!r}", tline)
    if head not in HEAD_FLAGS:
        raise ParseError(f"unknown head flag {head!r}", hline)
    codes = grid_codes(window)
    for c in table:
        if c not in codes:
            raise ParseError(f"code {c} outside window {window}", where[c], "code")
    for c in codes:
        if c not in table:
            raise ParseError(f"missing value for code {c}")
    for a, b in zip(codes, codes[1:]):
        if table[b] < table[a]:
            raise ParseError(
                f"modulus decreases between codes {a} and {b}", where[b], "monotonicity"
            )
    if head == "vanishes" and table[-window] == INF:
        raise ParseError("head 'vanishes' contradicts inf at the smallest scale", where[-window], "flag")
    if tail == "bounded" and table[window] == INF:
        raise ParseError("tail 'bounded' contradicts inf at the largest scale", where[window], "flag")
    return Modulus(window, table, tail, head)


def format_modulus(mod: Modulus) -> str:
    out = [f"window {mod.window}", f"tail {mod.tail}", f"head {mod.head}"]
    out += [f"{c} {format_rational(v)}" for c, v in mod.items()]
    return "\n".join(out) + "\n"


def parse_relation(text: str) -> FiniteRelation:
    nodes: List[str] = []
    edges: List[Tuple[str, str]] = []
    seen_nodes, seen_edges = set(), set()
    for no, line in _lines(text):
        parts = line.split()
        if parts[0] == "node" and len(parts) == 2:
            if parts[1] in seen_nodes:
                raise ParseError(f"node {parts[1]!r} declared twice", no)
            seen_nodes.add(parts[1])
            nodes.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 3:
            e = (parts[1], parts[2])
            if e in seen_edges:
                raise ParseError(f"duplicate edge {e}", no)
            seen_edges.add(e)
            edges.append((e, no))
        else:
            raise ParseError("expected 'node x' or 'edge y x'", no)
    for (y, x), no in edges:
        for v in (y, x):
            if v not in seen_nodes:
                raise ParseError(f"edge uses undeclared node {v!r}", no)
    return FiniteRelation(tuple(nodes), tuple(e for e, _ in edges))


def format_relation(rel: FiniteRelation) -> str:
    out = [f"node {x}" for x in rel.nodes] + [f"edge {y} {x}" for y, x in rel.edges]
    return "\n".join(out) + "\n"


def parse_map(text: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for no, line in _lines(text):
        if "->" in line:
            src, _, dst = line.partition("->")
            src, dst = src.strip(), dst.strip()
        else:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected 'source target'", no)
            src, dst = parts
        if not src or not dst:
            raise ParseError("empty label", no)
        if src in out:
            raise ParseError(f"{src!r} mapped twice", no)
        out[src] = dst
    return out


def format_map(phi: Dict[str, str]) -> str:
    spaced = any(" " in k or " " in v for k, v in phi.items())
    sep = " -> " if spaced else " "
    return "".join(f"{k}{sep}{v}\n" for k, v in phi.items())


def parse_family(text: str) -> List[Tuple[SeqFn, SeqFn]]:
    pairs = []
    for no, line in _lines(text):
        left, sep, right = line.partition("|")
        if not sep:
            raise ParseError("expected '<g> | <f>'", no)
        try:
            pairs.append((parse_seqfn(left), parse_seqfn(right)))
        except ValueError as exc:
            raise ParseError(str(exc), no) from None
    if not pairs:
        raise ParseError("empty family")
    return pairs


def format_family(pairs) -> str:
    return "".join(f"{g} | {f}\n" for g, f in pairs)
