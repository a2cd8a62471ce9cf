"""Pruning procedures: given a faulty graph and the expansion of the
original, iteratively cull sparse sets until the remainder certifies a
large well-expanding subgraph.

The node variant culls canonical minimizers of |boundary|/|S|; the edge
variant culls the compactified form of edge-ratio minimizers. Both
record a full trace and recheck the telescoping boundary invariant on
every prefix: the boundary of everything culled so far, measured in the
input graph, never exceeds the sum of per-step boundaries, which never
exceeds alpha*eps times the culled size.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, InputError
from .expansion import (
    EXACT_EXPANSION_LIMIT,
    find_sparse_edge_cut,
    find_sparse_node_cut,
)
from .graph import (
    Graph,
    canon_nodes,
    edge_boundary,
    is_compact,
    is_connected,
    is_connected_subset,
    node_boundary,
    remove_nodes,
)


@dataclass(frozen=True)
class PruneStep:
    index: int
    graph_size: int  # nodes alive when the step ran
    nodes: tuple  # culled set, root ids
    raw_nodes: tuple  # set the sparse-cut search found (pre-compactify)
    boundary_size: int  # its node or edge boundary in the current graph
    ratio: Fraction
    compact: bool | None = None  # edge mode only, None when host disconnected


@dataclass(frozen=True)
class PruneTrace:
    mode: str  # "node" or "edge"
    alpha: Fraction
    eps: Fraction
    n_start: int
    steps: tuple
    final_nodes: tuple  # root ids of the surviving subgraph
    prefix_checks: tuple  # (union_boundary, boundary_sum, union_size) per step
    certified: bool = True  # exact finders used throughout

    @property
    def removed_total(self) -> int:
        return sum(len(s.nodes) for s in self.steps)

    @property
    def h_size(self) -> int:
        return len(self.final_nodes)

    def to_payload(self) -> dict:
        return {
            "mode": self.mode,
            "certified": self.certified,
            "alpha": {"num": self.alpha.numerator, "den": self.alpha.denominator},
            "eps": {"num": self.eps.numerator, "den": self.eps.denominator},
            "n_start": self.n_start,
            "steps": [
                {
                    "index": s.index,
                    "graph_size": s.graph_size,
                    "nodes": list(s.nodes),
                    "raw_nodes": list(s.raw_nodes),
                    "boundary_size": s.boundary_size,
                    "ratio": {"num": s.ratio.numerator, "den": s.ratio.denominator},
                    **({"compact": s.compact} if self.mode == "edge" else {}),
                }
                for s in self.steps
            ],
            "final_nodes": list(self.final_nodes),
            "removed_total": self.removed_total,
            "h_size": self.h_size,
        }


def _validate_params(alpha: Fraction, eps: Fraction) -> None:
    if alpha <= 0:
        raise InputError("alpha must be positive; a disconnected original has no guarantee")
    if not 0 < eps < 1:
        raise InputError("eps must lie strictly between 0 and 1")


def _root_to_local(g: Graph) -> dict:
    if g.node_map is None:
        return {v: v for v in range(g.n)}
    return {r: v for v, r in enumerate(g.node_map)}


def _components_within(g: Graph, nodes) -> list:
    """Connected components of induced(nodes), in g-local ids,
    largest first then smallest id."""
    todo = set(nodes)
    comps = []
    while todo:
        start = min(todo)
        todo.discard(start)
        comp = [start]
        stack = [start]
        while stack:
            v = stack.pop()
            for u in g.adjacency[v]:
                if u in todo:
                    todo.discard(u)
                    comp.append(u)
                    stack.append(u)
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def _compact_cull(g: Graph, s: tuple) -> tuple:
    """Turn a connected set with 2|s| <= n into a compact one whose
    edge ratio is no worse; see compactify for the three cases."""
    assert 2 * len(s) <= g.n
    rest = sorted(set(range(g.n)) - set(s))
    comps = _components_within(g, rest)
    if len(comps) == 1:
        return s
    big = [c for c in comps if 2 * len(c) >= g.n]
    if big:
        keep = set(big[0])
        return tuple(v for v in range(g.n) if v not in keep)
    best = None
    for c in comps:
        ratio = Fraction(len(edge_boundary(g, c)), len(c))
        key = (ratio, len(c), c)
        if best is None or key < best:
            best = key
    return best[2]


def compactify(g: Graph, s) -> tuple:
    """Replace a connected set by a compact set with edge ratio no
    worse than the input's.

    Host must be connected (three disjoint triangles show the guarantee
    fails otherwise) and 2|s| < n. Case analysis on the complement's
    components: complement connected keeps s; a component holding at
    least half the graph gets complemented away; otherwise the best
    edge-ratio component wins.
    """
    s_t = canon_nodes(g, s)
    if not s_t:
        raise InputError("compactify needs a nonempty set")
    if not is_connected(g):
        raise InputError("compactify needs a connected host graph")
    if not is_connected_subset(g, s_t):
        raise InputError("compactify needs a connected set")
    if 2 * len(s_t) >= g.n:
        raise InputError("compactify needs 2|s| < n")
    out = _compact_cull(g, s_t)
    if not is_compact(g, out):
        raise ContractError("compactify produced a non-compact set")
    return out


def _heuristic_cut(cur: Graph, mode: str, threshold: Fraction, index: int):
    """Propose a cull set without the exact sweep: take the heuristic
    expansion witness and accept it only if it meets the loop condition.
    Misses cuts the exact finder would see, hence certified=False."""
    from .expansion import edge_expansion_heuristic, node_expansion_heuristic

    fn = node_expansion_heuristic if mode == "node" else edge_expansion_heuristic
    wit = fn(cur, trials=8, seed=index).witness
    s = () if wit is None else wit.set
    if not s or 2 * len(s) > cur.n:
        return None
    if mode == "node":
        bnd = len(node_boundary(cur, s))
    else:
        bnd = len(edge_boundary(cur, s))
    if Fraction(bnd, len(s)) <= threshold:
        return tuple(s)
    return None


def _prune_loop(
    g_f: Graph,
    alpha: Fraction,
    eps: Fraction,
    mode: str,
    limit: int,
    method: str = "exact",
) -> PruneTrace:
    _validate_params(alpha, eps)
    if method not in ("exact", "heuristic"):
        raise InputError(f"unknown prune method {method!r}")
    to_local = _root_to_local(g_f)
    cur = g_f
    steps = []
    checks = []
    union_root: list = []
    bnd_sum = 0
    threshold = alpha * eps
    while True:
        if method == "heuristic":
            raw_local = _heuristic_cut(cur, mode, threshold, len(steps))
        elif mode == "node":
            found = find_sparse_node_cut(cur, alpha, eps, limit=limit)
            raw_local = None if found is None else found.set
        else:
            found = find_sparse_edge_cut(cur, alpha, eps, limit=limit)
            raw_local = None if found is None else found.set
        if raw_local is None:
            break
        compact_flag = None
        if mode == "node":
            cull_local = raw_local
            bnd = len(node_boundary(cur, cull_local))
        else:
            if is_connected(cur) and is_connected_subset(cur, raw_local):
                cull_local = _compact_cull(cur, raw_local)
                compact_flag = is_compact(cur, cull_local)
                if not compact_flag:
                    raise ContractError("edge prune culled a non-compact set")
            else:
                # no compactness guarantee across components; cull as found
                cull_local = raw_local
            bnd = len(edge_boundary(cur, cull_local))
            if Fraction(bnd, len(cull_local)) > threshold:
                raise ContractError("compactified set exceeded the cull threshold")
        ratio = Fraction(bnd, len(cull_local))
        nodes_root = cur.original_ids(cull_local)
        raw_root = cur.original_ids(raw_local)
        steps.append(
            PruneStep(
                index=len(steps),
                graph_size=cur.n,
                nodes=nodes_root,
                raw_nodes=raw_root,
                boundary_size=bnd,
                ratio=ratio,
                compact=compact_flag,
            )
        )
        union_root.extend(nodes_root)
        bnd_sum += bnd
        union_local = sorted(to_local[r] for r in union_root)
        if mode == "node":
            union_bnd = len(node_boundary(g_f, union_local))
        else:
            union_bnd = len(edge_boundary(g_f, union_local))
        checks.append((union_bnd, bnd_sum, len(union_local)))
        if union_bnd > bnd_sum:
            raise ContractError("union boundary exceeded the per-step boundary sum")
        if bnd_sum > threshold * len(union_local):
            raise ContractError("boundary sum exceeded alpha*eps times the culled size")
        cur = remove_nodes(cur, cull_local)
    return PruneTrace(
        mode=mode,
        alpha=alpha,
        eps=eps,
        n_start=g_f.n,
        steps=tuple(steps),
        final_nodes=cur.original_ids(range(cur.n)),
        prefix_checks=tuple(checks),
        certified=method == "exact",
    )


def prune(
    g_faulty: Graph,
    alpha: Fraction,
    eps: Fraction,
    *,
    limit: int = EXACT_EXPANSION_LIMIT,
    method: str = "exact",
) -> PruneTrace:
    """Node pruning: repeatedly cull the canonical minimizer S with
    |boundary(S)| <= alpha*eps*|S|, |S| <= half the current graph.
    alpha is the node expansion of the original fault-free graph.

    method="heuristic" lifts the size limit but may stop early, so the
    loop-exit contract no longer holds and the trace is not certified.
    """
    return _prune_loop(g_faulty, Fraction(alpha), Fraction(eps), "node", limit, method)


def prune2(
    g_faulty: Graph,
    alpha_e: Fraction,
    eps: Fraction,
    *,
    limit: int = EXACT_EXPANSION_LIMIT,
    method: str = "exact",
) -> PruneTrace:
    """Edge pruning: like prune but on edge boundaries, and each culled
    set is first compactified, which never worsens its edge ratio.
    alpha_e is the edge expansion of the original fault-free graph."""
    return _prune_loop(
        g_faulty, Fraction(alpha_e), Fraction(eps), "edge", limit, method
    )


def union_boundary_check(g_f: Graph, trace: PruneTrace) -> list:
    """Recompute the prefix invariant of a trace from scratch against
    the faulty graph it was produced on. Returns one dict per prefix;
    every 'ok' must be True for a trace produced by prune or prune2."""
    to_local = _root_to_local(g_f)
    out = []
    union_root: list = []
    bnd_sum = 0
    threshold = trace.alpha * trace.eps
    for step in trace.steps:
        union_root.extend(step.nodes)
        bnd_sum += step.boundary_size
        union_local = sorted(to_local[r] for r in union_root)
        if trace.mode == "node":
            union_bnd = len(node_boundary(g_f, union_local))
        else:
            union_bnd = len(edge_boundary(g_f, union_local))
        ok = union_bnd <= bnd_sum and Fraction(bnd_sum) <= threshold * len(union_local)
        out.append(
            {
                "prefix": step.index + 1,
                "union_boundary": union_bnd,
                "boundary_sum": bnd_sum,
                "union_size": len(union_local),
                "ok": ok,
            }
        )
    return out


def size_lower_bound(n: int, alpha: Fraction, k: int, f: int) -> Fraction:
    """Guaranteed surviving size after f faults with eps = 1 - 1/k."""
    return Fraction(n) - Fraction(k * f) / alpha


def expansion_lower_bound(alpha: Fraction, k: int) -> Fraction:
    """Guaranteed expansion of the survivor, eps = 1 - 1/k."""
    return (1 - Fraction(1, k)) * alpha


def hypothesis_ok(n: int, alpha: Fraction, k: int, f: int) -> bool:
    """Precondition for the guarantees: k*f/alpha <= n/4."""
    return Fraction(k * f) / alpha <= Fraction(n, 4)


@dataclass(frozen=True)
class ShatterStep:
    index: int
    component_size: int
    picked: tuple  # root ids of the chosen set U
    removed: tuple  # root ids of its failed boundary


@dataclass(frozen=True)
class ShatterResult:
    eps: Fraction
    n: int
    failed: tuple  # all failed nodes, root ids, sorted
    steps: tuple
    components: tuple  # final components, root ids, canonical order

    @property
    def total_failed(self) -> int:
        return len(self.failed)

    def to_payload(self) -> dict:
        return {
            "eps": {"num": self.eps.numerator, "den": self.eps.denominator},
            "n": self.n,
            "failed": list(self.failed),
            "steps": [
                {
                    "index": s.index,
                    "component_size": s.component_size,
                    "picked": list(s.picked),
                    "removed": list(s.removed),
                }
                for s in self.steps
            ],
            "components": [list(c) for c in self.components],
            "total_failed": self.total_failed,
        }


def shatter_uniform(
    g: Graph, eps: Fraction, *, limit: int = EXACT_EXPANSION_LIMIT
) -> ShatterResult:
    """Fail node boundaries until every component has at most eps*n
    nodes: the lower-bound construction showing how few faults suffice
    to break the graph into small pieces.

    While some component is strictly larger than eps*n, the canonical
    min node-ratio set of the largest component is picked and its
    boundary failed.
    """
    from . import kernels
    from .graph import induced_subgraph

    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise InputError("eps must lie in (0, 1]")
    if g.n < 1:
        raise InputError("shatter needs a nonempty graph")
    if eps * g.n < 1:
        raise InputError("eps*n below 1 would demand empty components")
    if g.n > limit:
        from .errors import LimitError

        raise LimitError(f"shatter is limited to n <= {limit}, got n={g.n}")
    target = eps * g.n
    cur = g
    steps = []
    failed_root: list = []
    while True:
        comps = _components_within(cur, range(cur.n)) if cur.n else []
        if not comps or len(comps[0]) <= target:
            break
        sub = induced_subgraph(cur, comps[0])
        adj = kernels.adjacency_masks(sub.adjacency)
        bnd, size, mask = kernels.min_ratio_node_cut(sub.n, adj, sub.n // 2)
        picked_sub = []
        m = mask
        while m:
            low = m & -m
            picked_sub.append(low.bit_length() - 1)
            m ^= low
        removed_sub = node_boundary(sub, picked_sub)
        picked_root = sub.original_ids(picked_sub)
        removed_root = sub.original_ids(removed_sub)
        steps.append(
            ShatterStep(
                index=len(steps),
                component_size=len(comps[0]),
                picked=picked_root,
                removed=removed_root,
            )
        )
        failed_root.extend(removed_root)
        to_local = _root_to_local(cur)
        cur = remove_nodes(cur, sorted(to_local[r] for r in removed_root))
    final_comps = tuple(
        cur.original_ids(c) for c in _components_within(cur, range(cur.n))
    )
    return ShatterResult(
        eps=eps,
        n=g.n,
        failed=tuple(sorted(failed_root)),
        steps=tuple(steps),
        components=final_comps,
    )
