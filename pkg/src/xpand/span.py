"""Span: how much bigger the minimal connector of a set's boundary is
than the boundary itself.

The span of a graph is the maximum over compact sets U of |P(U)| /
|boundary(U)|, where P(U) is a minimum-node tree spanning the boundary
(Steiner nodes allowed anywhere in the graph). Meshes admit a direct
certificate that this never exceeds 2, checked here edge by edge
without any Steiner search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import InputError, LimitError, NoSteinerTreeError, SamplingError
from .faults import make_rng, rand_below
from .generators import mesh_coords, mesh_index
from .graph import Graph, canon_nodes, is_compact, is_connected, node_boundary

COMPACT_ENUM_LIMIT = 18
STEINER_TERMINAL_LIMIT = 14


@dataclass(frozen=True)
class SpanReport:
    method: str  # "exact" or "sampled"
    value: Fraction
    argmax: tuple  # compact set reaching the value (first in canonical order)
    boundary: tuple  # its node boundary, the tree's terminals
    tree_edges: tuple  # a minimum-node tree spanning the boundary
    tree_size: int
    considered: int  # compact sets whose Steiner tree was computed
    skipped: int  # compact sets dismissed by upper bounds

    @property
    def boundary_size(self) -> int:
        return len(self.boundary)

    def to_payload(self) -> dict:
        return {
            "method": self.method,
            "value_num": self.value.numerator,
            "value_den": self.value.denominator,
            "argmax": list(self.argmax),
            "boundary": list(self.boundary),
            "boundary_size": self.boundary_size,
            "tree_edges": [list(e) for e in self.tree_edges],
            "tree_size": self.tree_size,
            "considered": self.considered,
            "skipped": self.skipped,
        }


def steiner_tree_min(g: Graph, terminals, *, terminal_limit: int = STEINER_TERMINAL_LIMIT):
    """Minimum-node tree spanning the terminals: (node_count, edges).

    Edges are canonical (min, max) pairs, sorted. Raises
    NoSteinerTreeError when the terminals span several components.
    """
    terms = canon_nodes(g, terminals)
    if not terms:
        raise InputError("steiner tree needs at least one terminal")
    if len(terms) > terminal_limit:
        raise LimitError(f"steiner search is limited to {terminal_limit} terminals")
    adj = kernels.adjacency_masks(g.adjacency)
    res = kernels.steiner_min_tree(g.n, adj, terms)
    if res is None:
        raise NoSteinerTreeError("terminals do not lie in one component")
    count, edges, _method = res
    return count, edges


def enumerate_compact_sets(g: Graph, *, limit: int = COMPACT_ENUM_LIMIT):
    """All compact sets of g as sorted tuples, canonical order."""
    if g.n > limit:
        raise LimitError(f"compact enumeration is limited to n <= {limit}, got n={g.n}")
    adj = kernels.adjacency_masks(g.adjacency)
    out = []
    for mask in kernels.compact_masks(g.n, adj):
        nodes = []
        m = mask
        while m:
            low = m & -m
            nodes.append(low.bit_length() - 1)
            m ^= low
        out.append(tuple(nodes))
    return out


def _greedy_connector_size(g: Graph, terms: tuple) -> int:
    """Cheap upper bound on the minimum connector size: attach each
    terminal to the tree grown so far by a shortest path."""
    tree = {terms[0]}
    for target in terms[1:]:
        if target in tree:
            continue
        prev = {target: None}
        queue = [target]
        head = 0
        hit = None
        while head < len(queue) and hit is None:
            v = queue[head]
            head += 1
            for u in g.adjacency[v]:
                if u not in prev:
                    prev[u] = v
                    if u in tree:
                        hit = u
                        break
                    queue.append(u)
        v = hit
        while v is not None:
            tree.add(v)
            v = prev[v]
    return len(tree)


def span_exact(g: Graph, *, limit: int = COMPACT_ENUM_LIMIT) -> SpanReport:
    """Exact span by walking every compact set in canonical order.

    Two skips keep this affordable, and neither can change the result:
    a set is dismissed when even n/|boundary|, or the greedy connector
    bound, cannot strictly beat the best ratio so far. Ties keep the
    first compact set in canonical order, and a dismissed set can at
    best tie.
    """
    if g.n < 2:
        raise InputError("span needs at least 2 nodes")
    if not is_connected(g):
        raise InputError("span is defined for connected graphs")
    if g.n > limit:
        raise LimitError(f"exact span is limited to n <= {limit}, got n={g.n}")
    adj = kernels.adjacency_masks(g.adjacency)
    best = None  # (ratio, set, boundary, tree_edges, tree_size)
    considered = 0
    skipped = 0
    for mask in kernels.compact_masks(g.n, adj):
        nodes = []
        m = mask
        while m:
            low = m & -m
            nodes.append(low.bit_length() - 1)
            m ^= low
        bnd = node_boundary(g, nodes)
        t = len(bnd)
        if best is not None and Fraction(g.n, t) <= best[0]:
            skipped += 1
            continue
        if best is not None and Fraction(_greedy_connector_size(g, bnd), t) <= best[0]:
            skipped += 1
            continue
        res = kernels.steiner_min_tree(g.n, adj, bnd)
        assert res is not None  # boundary of a compact set in a connected graph
        count = res[0]
        considered += 1
        ratio = Fraction(count, t)
        if best is None or ratio > best[0]:
            best = (ratio, tuple(nodes), bnd, tuple(res[1]), count)
    assert best is not None  # connected n >= 2 has a compact singleton
    return SpanReport(
        method="exact",
        value=best[0],
        argmax=best[1],
        boundary=best[2],
        tree_edges=best[3],
        tree_size=best[4],
        considered=considered,
        skipped=skipped,
    )


def sample_compact_set(g: Graph, rng, *, max_size: int | None = None):
    """Grow one random connected set and return it if compact, else None."""
    cap = g.n // 2 if max_size is None else min(max_size, g.n // 2)
    if cap < 1:
        return None
    target = 1 + rand_below(rng, cap)
    start = rand_below(rng, g.n)
    members = {start}
    frontier = sorted(g.adjacency[start])
    while len(members) < target and frontier:
        nxt = frontier[rand_below(rng, len(frontier))]
        members.add(nxt)
        frontier = sorted(
            {u for v in members for u in g.adjacency[v] if u not in members}
        )
    nodes = tuple(sorted(members))
    if len(nodes) == g.n or not is_compact(g, nodes):
        return None
    return nodes


def span_sampled(
    g: Graph,
    trials: int,
    seed: int,
    *,
    max_size: int | None = None,
    terminal_limit: int = STEINER_TERMINAL_LIMIT,
) -> SpanReport:
    """Monte Carlo lower bound on the span from randomly grown compact
    sets. trials counts attempts; rejected growths (non-compact, or
    boundary above the terminal budget) still consume their draws."""
    if g.n < 2:
        raise InputError("span needs at least 2 nodes")
    if not is_connected(g):
        raise InputError("span is defined for connected graphs")
    if trials < 1:
        raise InputError("need at least one trial")
    rng = make_rng(seed)
    adj = kernels.adjacency_masks(g.adjacency)
    best = None
    considered = 0
    skipped = 0
    for _ in range(int(trials)):
        nodes = sample_compact_set(g, rng, max_size=max_size)
        if nodes is None:
            skipped += 1
            continue
        bnd = node_boundary(g, nodes)
        if len(bnd) > terminal_limit:
            skipped += 1
            continue
        res = kernels.steiner_min_tree(g.n, adj, bnd)
        assert res is not None
        considered += 1
        ratio = Fraction(res[0], len(bnd))
        if best is None or ratio > best[0]:
            best = (ratio, nodes, bnd, tuple(res[1]), res[0])
    if best is None:
        raise SamplingError("no attempt produced a usable compact set")
    return SpanReport(
        method="sampled",
        value=best[0],
        argmax=best[1],
        boundary=best[2],
        tree_edges=best[3],
        tree_size=best[4],
        considered=considered,
        skipped=skipped,
    )


def mesh_virtual_boundary_graph(dims, boundary) -> Graph:
    """Virtual graph on a mesh boundary: two boundary nodes are joined
    when they differ in at most two coordinates, each by exactly one.
    node_map carries the original mesh ids."""
    dims = tuple(int(d) for d in dims)
    b = tuple(sorted(set(int(v) for v in boundary)))
    coords = [mesh_coords(dims, v) for v in b]
    edges = []
    for i in range(len(b)):
        for j in range(i + 1, len(b)):
            diff = [
                (axis, cj - ci)
                for axis, (ci, cj) in enumerate(zip(coords[i], coords[j]))
                if ci != cj
            ]
            if 1 <= len(diff) <= 2 and all(abs(d) == 1 for _axis, d in diff):
                edges.append((i, j))
    return Graph.from_edges(len(b), edges, node_map=b)


def expand_virtual_edge(dims, u: int, v: int) -> tuple:
    """Mesh nodes realizing a virtual edge: () when u, v are already
    mesh-adjacent, otherwise the single intermediate that flips the
    first differing coordinate of u to v's value."""
    dims = tuple(int(d) for d in dims)
    cu = mesh_coords(dims, u)
    cv = mesh_coords(dims, v)
    diff = [axis for axis in range(len(dims)) if cu[axis] != cv[axis]]
    if any(abs(cu[axis] - cv[axis]) != 1 for axis in diff):
        raise InputError(f"{u} and {v} are not joined by a virtual edge")
    if len(diff) == 1:
        return ()
    if len(diff) != 2:
        raise InputError(f"{u} and {v} are not joined by a virtual edge")
    mid = list(cu)
    mid[diff[0]] = cv[diff[0]]
    return (mesh_index(dims, mid),)


@dataclass(frozen=True)
class MeshSpanCertificate:
    dims: tuple
    checked: int
    failures: tuple  # compact sets whose virtual boundary graph split
    max_ratio: Fraction  # worst |connector| / |boundary| over checked sets

    @property
    def ok(self) -> bool:
        return not self.failures and self.max_ratio <= 2

    def to_payload(self) -> dict:
        return {
            "dims": list(self.dims),
            "checked": self.checked,
            "failures": [list(f) for f in self.failures],
            "max_ratio_num": self.max_ratio.numerator,
            "max_ratio_den": self.max_ratio.denominator,
            "ok": self.ok,
        }


def _certify_one(g: Graph, dims, nodes):
    """Returns (ok, ratio) for one compact set: the virtual boundary
    graph must be connected, and a spanning tree expanded back into
    mesh nodes must connect the boundary with at most 2|boundary|
    nodes."""
    bnd = node_boundary(g, nodes)
    virt = mesh_virtual_boundary_graph(dims, bnd)
    if not is_connected(virt):
        return False, None
    # breadth-first spanning tree from the smallest boundary node
    connector = set(bnd)
    seen = {0}
    queue = [0]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for y in virt.adjacency[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
                connector.update(expand_virtual_edge(dims, bnd[x], bnd[y]))
    ratio = Fraction(len(connector), len(bnd))
    return True, ratio


def verify_mesh_span_certificate(
    dims,
    *,
    exhaustive: bool = True,
    samples: int = 0,
    seed: int = 0,
    limit: int = COMPACT_ENUM_LIMIT,
) -> MeshSpanCertificate:
    """Check the two-times-boundary connector certificate on a mesh,
    over every compact set (exhaustive) or over randomly grown ones."""
    from .generators import mesh as make_mesh

    dims = tuple(int(d) for d in dims)
    g = make_mesh(dims)
    failures = []
    max_ratio = Fraction(0)
    checked = 0
    if exhaustive:
        if g.n > limit:
            raise LimitError(
                f"exhaustive certificate is limited to n <= {limit}, got n={g.n}"
            )
        adj = kernels.adjacency_masks(g.adjacency)
        for mask in kernels.compact_masks(g.n, adj):
            nodes = []
            m = mask
            while m:
                low = m & -m
                nodes.append(low.bit_length() - 1)
                m ^= low
            ok, ratio = _certify_one(g, dims, tuple(nodes))
            checked += 1
            if not ok:
                failures.append(tuple(nodes))
            elif ratio > max_ratio:
                max_ratio = ratio
    else:
        if samples < 1:
            raise InputError("sampled certificate needs at least one sample")
        rng = make_rng(seed)
        for _ in range(int(samples)):
            nodes = sample_compact_set(g, rng)
            if nodes is None:
                continue
            ok, ratio = _certify_one(g, dims, nodes)
            checked += 1
            if not ok:
                failures.append(nodes)
            elif ratio > max_ratio:
                max_ratio = ratio
        if checked == 0:
            raise SamplingError("no sample produced a compact set")
    return MeshSpanCertificate(
        dims=dims,
        checked=checked,
        failures=tuple(failures),
        max_ratio=max_ratio,
    )
