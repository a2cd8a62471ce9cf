"""Immutable simple graphs plus the subset primitives everything else uses.

Nodes are dense integer ids 0..n-1. Node sets travel in canonical form:
a tuple sorted ascending with no duplicates. Graphs produced by node
removal carry a ``node_map`` translating their local ids back to the ids
of the root graph they were derived from, so analysis traces can always
report sets in original coordinates.

Text format for graph files: '#' starts a comment, the first data line is
``n m``, followed by exactly m lines ``u v`` with 0 <= u < v < n. Duplicate
edges and self-loops are load errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import InputError, LoadError

NodeSet = tuple  # canonical node set: sorted ascending, unique entries


class Graph:
    """Undirected simple graph, immutable after construction."""

    __slots__ = ("_adj", "_node_map", "_m", "_max_degree")

    def __init__(self, adjacency: Iterable[Iterable[int]], node_map=None):
        adj = tuple(tuple(sorted(set(nb))) for nb in adjacency)
        n = len(adj)
        m2 = 0
        maxdeg = 0
        for v, nbrs in enumerate(adj):
            if len(nbrs) > maxdeg:
                maxdeg = len(nbrs)
            m2 += len(nbrs)
            for u in nbrs:
                if not 0 <= u < n:
                    raise InputError(f"neighbor id {u} out of range for n={n}")
                if u == v:
                    raise InputError(f"self-loop at node {v}")
                if v not in adj[u]:
                    raise InputError(f"asymmetric adjacency between {u} and {v}")
        self._adj = adj
        self._m = m2 // 2
        self._max_degree = maxdeg
        if node_map is not None:
            node_map = tuple(node_map)
            if len(node_map) != n:
                raise InputError("node_map length must equal node count")
        self._node_map = node_map

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], node_map=None) -> "Graph":
        if n < 0:
            raise InputError("node count must be nonnegative")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise InputError(f"self-loop edge ({u},{v})")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise InputError(f"duplicate edge ({u},{v})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        return cls(adj, node_map=node_map)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    @property
    def max_degree(self) -> int:
        return self._max_degree

    @property
    def adjacency(self) -> tuple:
        return self._adj

    @property
    def node_map(self):
        """Local id -> root-graph id, or None when ids are already root ids."""
        return self._node_map

    def neighbors(self, v: int) -> tuple:
        self._check_node(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check_node(v)
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        return v in self._adj[u]

    def edges(self) -> Iterator[tuple]:
        """Yield edges as (u, v) with u < v, ascending."""
        for u, nbrs in enumerate(self._adj):
            for v in nbrs:
                if v > u:
                    yield (u, v)

    def original_ids(self, nodes: Iterable[int]) -> tuple:
        """Translate local ids through node_map into root-graph ids."""
        if self._node_map is None:
            return canon_nodes(self, nodes)
        return tuple(sorted(self._node_map[v] for v in canon_nodes(self, nodes)))

    def _check_node(self, v: int) -> None:
        if not 0 <= v < len(self._adj):
            raise InputError(f"node id {v} out of range for n={len(self._adj)}")

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Cut:
    """A node subset with its exact boundary statistics."""

    set: tuple
    node_boundary: tuple
    edge_boundary_size: int
    node_ratio: Fraction
    edge_ratio: Fraction


def canon_nodes(g: Graph, nodes: Iterable[int]) -> tuple:
    """Validate ids against g and return the canonical sorted tuple."""
    out = []
    seen = set()
    for v in nodes:
        v = int(v)
        if not 0 <= v < g.n:
            raise InputError(f"node id {v} out of range for n={g.n}")
        if v in seen:
            raise InputError(f"duplicate node id {v} in set")
        seen.add(v)
        out.append(v)
    return tuple(sorted(out))


def node_boundary(g: Graph, s: Iterable[int]) -> tuple:
    """Nodes outside s adjacent to s, canonical order."""
    s_set = set(canon_nodes(g, s))
    out = set()
    for v in s_set:
        for u in g.adjacency[v]:
            if u not in s_set:
                out.add(u)
    return tuple(sorted(out))


def edge_boundary(g: Graph, s: Iterable[int]) -> tuple:
    """Edges with exactly one endpoint in s, as (min,max) pairs, ascending."""
    s_set = set(canon_nodes(g, s))
    out = []
    for v in s_set:
        for u in g.adjacency[v]:
            if u not in s_set:
                out.append((v, u) if v < u else (u, v))
    return tuple(sorted(set(out)))


def make_cut(g: Graph, s: Iterable[int]) -> Cut:
    """Build the Cut record for s; requires 0 < |s| < n."""
    s_t = canon_nodes(g, s)
    if not s_t or len(s_t) == g.n:
        raise InputError("cut set must be a nonempty proper subset")
    nb = node_boundary(g, s_t)
    eb = edge_boundary(g, s_t)
    small = min(len(s_t), g.n - len(s_t))
    return Cut(
        set=s_t,
        node_boundary=nb,
        edge_boundary_size=len(eb),
        node_ratio=Fraction(len(nb), len(s_t)),
        edge_ratio=Fraction(len(eb), small),
    )


def connected_components(g: Graph) -> list:
    """Components as canonical tuples, largest first, ties by smallest id."""
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        stack = [start]
        while stack:
            v = stack.pop()
            for u in g.adjacency[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    stack.append(u)
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return len(connected_components(g)[0]) == g.n


def is_connected_subset(g: Graph, nodes: Iterable[int]) -> bool:
    """True iff the subgraph induced by nodes is connected (and nonempty)."""
    s_t = canon_nodes(g, nodes)
    if not s_t:
        return False
    s_set = set(s_t)
    seen = {s_t[0]}
    stack = [s_t[0]]
    while stack:
        v = stack.pop()
        for u in g.adjacency[v]:
            if u in s_set and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(s_set)


def is_compact(g: Graph, u: Iterable[int]) -> bool:
    """True iff induced(u) and induced(V minus u) are both connected.

    Undefined for u empty or u = V; those raise InputError.
    """
    u_t = canon_nodes(g, u)
    if not u_t or len(u_t) == g.n:
        raise InputError("compactness is undefined for the empty set and for V")
    rest = sorted(set(range(g.n)) - set(u_t))
    return is_connected_subset(g, u_t) and is_connected_subset(g, rest)


def remove_nodes(g: Graph, s: Iterable[int]) -> Graph:
    """Graph induced on V minus s; node_map composes back to root ids."""
    s_set = set(canon_nodes(g, s))
    keep = [v for v in range(g.n) if v not in s_set]
    local = {v: i for i, v in enumerate(keep)}
    adj = [[local[u] for u in g.adjacency[v] if u not in s_set] for v in keep]
    if g.node_map is None:
        nm = tuple(keep)
    else:
        nm = tuple(g.node_map[v] for v in keep)
    return Graph(adj, node_map=nm)


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    """Graph induced on keep (complement of remove_nodes)."""
    keep_t = canon_nodes(g, keep)
    drop = set(range(g.n)) - set(keep_t)
    return remove_nodes(g, drop)


def loads(text: str) -> Graph:
    """Parse the plain text graph format."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line)
    if not rows:
        raise LoadError("empty graph file")
    head = rows[0].split()
    if len(head) != 2:
        raise LoadError(f"header must be 'n m', got {rows[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise LoadError(f"header must be 'n m', got {rows[0]!r}") from None
    if n < 0 or m < 0:
        raise LoadError("n and m must be nonnegative")
    if len(rows) - 1 != m:
        raise LoadError(f"expected {m} edge lines, found {len(rows) - 1}")
    edges = []
    for line in rows[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise LoadError(f"bad edge line {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise LoadError(f"bad edge line {line!r}") from None
        if u == v:
            raise LoadError(f"self-loop line {line!r}")
        if not u < v:
            raise LoadError(f"edge line must satisfy u < v, got {line!r}")
        if v >= n:
            raise LoadError(f"edge line {line!r} out of range for n={n}")
        edges.append((u, v))
    if len(set(edges)) != len(edges):
        raise LoadError("duplicate edge line")
    return Graph.from_edges(n, edges)


def dumps(g: Graph) -> str:
    """Serialize to the text format with edges in canonical order."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def load_file(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dump_file(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g))
