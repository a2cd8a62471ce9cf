"""Pure-Python bitmask kernels, the reference backend.

Node sets are int bitmasks over local ids. Every routine is
deterministic; ties break by (ratio, then set size, then
lexicographically smallest canonical set). For bitmasks, set A is
lex-smaller than set B iff the lowest bit of A ^ B belongs to A, which
agrees with comparing the sorted id tuples.

The compiled backend (xpand._kernels_cy) mirrors this module function
for function and must return bit-identical results.
"""

from __future__ import annotations

INF = 1 << 30
BACKEND_NAME = "python"


def adjacency_masks(adjacency) -> list:
    masks = []
    for nbrs in adjacency:
        m = 0
        for u in nbrs:
            m |= 1 << u
        masks.append(m)
    return masks


def _flood(start: int, allowed: int, adj) -> int:
    """Nodes reachable from start staying inside allowed, as a mask."""
    reached = start & allowed
    frontier = reached
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj[low.bit_length() - 1]
            m ^= low
        frontier = nxt & allowed & ~reached
        reached |= frontier
    return reached


def mask_connected(mask: int, adj) -> bool:
    if mask == 0:
        return False
    return _flood(mask & -mask, mask, adj) == mask


def _better(b1: int, s1: int, m1: int, b2: int, s2: int, m2: int) -> bool:
    """True iff cut (b1, s1, m1) beats (b2, s2, m2)."""
    lhs = b1 * s2
    rhs = b2 * s1
    if lhs != rhs:
        return lhs < rhs
    if s1 != s2:
        return s1 < s2
    if m1 == m2:
        return False
    diff = m1 ^ m2
    return bool(m1 & diff & -diff)


def min_ratio_node_cut(n: int, adj, max_size: int):
    """Minimize |outer node boundary| / |S| over 1 <= |S| <= max_size.

    Full sweep over all subsets; node-boundary minimizers need not be
    connected. Returns (boundary_size, set_size, set_mask) or None.
    """
    if n < 1 or max_size < 1:
        return None
    best = None
    for mask in range(1, 1 << n):
        size = mask.bit_count()
        if size > max_size:
            continue
        nbr = 0
        m = mask
        while m:
            low = m & -m
            nbr |= adj[low.bit_length() - 1]
            m ^= low
        bnd = (nbr & ~mask).bit_count()
        if best is None or _better(bnd, size, mask, best[0], best[1], best[2]):
            best = (bnd, size, mask)
    return best


def min_ratio_edge_cut(n: int, adj, max_size: int):
    """Minimize |edge boundary| / |S| over 1 <= |S| <= max_size.

    Sweeps all subsets. The canonical winner is always connected: any
    disconnected S has a component with ratio <= ratio(S) and smaller
    size, so it loses the (ratio, size) tie-break.
    Returns (cut_size, set_size, set_mask) or None.
    """
    if n < 1 or max_size < 1:
        return None
    best = None
    for mask in range(1, 1 << n):
        size = mask.bit_count()
        if size > max_size:
            continue
        cut = 0
        m = mask
        while m:
            low = m & -m
            cut += (adj[low.bit_length() - 1] & ~mask).bit_count()
            m ^= low
        if best is None or _better(cut, size, mask, best[0], best[1], best[2]):
            best = (cut, size, mask)
    return best


def compact_masks(n: int, adj) -> list:
    """Masks U with induced(U) and induced(V minus U) both connected.

    Ascending numeric mask order; this is the canonical enumeration
    order wherever compact sets are walked or reported.
    """
    full = (1 << n) - 1
    if n < 2:
        return []
    conn = bytearray(1 << n)
    for m in range(1, 1 << n):
        if _flood(m & -m, m, adj) == m:
            conn[m] = 1
    return [m for m in range(1, full) if conn[m] and conn[full ^ m]]


def connected_masks(n: int, adj, cap: int):
    """Masks of nonempty connected induced subgraphs, ascending.

    Returns None as soon as more than cap sets exist. Enumeration roots
    each set at its smallest node and branches on including or banning
    one frontier node at a time, so each set is emitted exactly once.
    """
    out = []
    full = (1 << n) - 1

    def rec(s: int, ext: int, banned: int) -> bool:
        if ext == 0:
            out.append(s)
            return len(out) <= cap
        u = ext & -ext
        grown = s | u
        new_ext = (ext | (adj[u.bit_length() - 1] & allowed & ~banned)) & ~grown
        if not rec(grown, new_ext, banned):
            return False
        return rec(s, ext ^ u, banned | u)

    for root in range(n):
        rootbit = 1 << root
        allowed = full & ~(rootbit - 1)
        if not rec(rootbit, adj[root] & allowed & ~rootbit, 0):
            return None
    out.sort()
    return out


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, nodes):
        self.parent = {v: v for v in nodes}

    def find(self, v: int) -> int:
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _mask_bits(mask: int) -> list:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _kruskal_lex(w: int, adj) -> tuple:
    """Lex-smallest spanning tree edge list of induced(w); w connected."""
    nodes = _mask_bits(w)
    dsu = _DSU(nodes)
    edges = []
    for u in nodes:
        for v in _mask_bits(adj[u] & w):
            if v > u and dsu.union(u, v):
                edges.append((u, v))
    return tuple(edges)


def steiner_min_tree(n: int, adj, terminals):
    """Minimum-node tree spanning the terminals.

    Returns (node_count, edges, method) or None when the terminals do
    not share a component. Small instances take the superset sweep,
    whose tie-break is the exact lex-min tree over all minimum node
    sets; larger ones take subset DP, which is deterministic but only
    guarantees some minimum tree.
    """
    terms = tuple(sorted({int(v) for v in terminals}))
    t = len(terms)
    assert t >= 1
    full = (1 << n) - 1
    reach = _flood(1 << terms[0], full, adj)
    for v in terms:
        if not (reach >> v) & 1:
            return None
    if t == 1:
        return (1, (), "trivial")
    free = n - t
    if free <= 22 and (1 << free) <= 4 * 3**t:
        return _steiner_sweep(n, adj, terms)
    assert t <= 16
    return _steiner_dw(n, adj, terms)


def _steiner_sweep(n: int, adj, terms):
    tmask = 0
    for v in terms:
        tmask |= 1 << v
    free_mask = ((1 << n) - 1) & ~tmask
    best_size = INF
    ties = []
    sub = free_mask
    while True:
        w = tmask | sub
        size = w.bit_count()
        if size <= best_size and mask_connected(w, adj):
            if size < best_size:
                best_size = size
                ties = [w]
            else:
                ties.append(w)
        if sub == 0:
            break
        sub = (sub - 1) & free_mask
    if best_size >= INF:
        return None
    best_edges = None
    for w in sorted(ties):
        edges = _kruskal_lex(w, adj)
        if best_edges is None or edges < best_edges:
            best_edges = edges
    return (best_size, best_edges, "sweep")


def _steiner_dw(n: int, adj, terms):
    """Subset DP with unit edge weights; node count is edge count + 1."""
    t = len(terms)
    full_ts = (1 << t) - 1
    nbuckets = 2 * n + 2
    dp = [[INF] * n for _ in range(full_ts + 1)]
    # parent: None, (0, u) tree edge from u, (1, submask) merge split
    pa = [[None] * n for _ in range(full_ts + 1)]
    for i, v in enumerate(terms):
        dp[1 << i][v] = 0
    for s in range(1, full_ts + 1):
        dps = dp[s]
        pas = pa[s]
        if s & (s - 1):
            low = s & -s
            sub = (s - 1) & s
            while sub:
                if sub & low:
                    rest = s ^ sub
                    dsub = dp[sub]
                    drest = dp[rest]
                    for v in range(n):
                        a, b = dsub[v], drest[v]
                        if a < INF and b < INF and a + b < dps[v]:
                            dps[v] = a + b
                            pas[v] = (1, sub)
                sub = (sub - 1) & s
        buckets = [[] for _ in range(nbuckets)]
        for v in range(n):
            if dps[v] < nbuckets:
                buckets[dps[v]].append(v)
        for d in range(nbuckets - 1):
            for v in buckets[d]:
                if dps[v] != d:
                    continue
                m = adj[v]
                while m:
                    lowb = m & -m
                    u = lowb.bit_length() - 1
                    m ^= lowb
                    if d + 1 < dps[u]:
                        dps[u] = d + 1
                        pas[u] = (0, v)
                        buckets[d + 1].append(u)
    root = terms[0]
    best = dp[full_ts][root]
    if best >= INF:
        return None
    edges = set()
    stack = [(full_ts, root)]
    while stack:
        s, v = stack.pop()
        step = pa[s][v]
        if step is None:
            continue
        kind, aux = step
        if kind == 0:
            edges.add((aux, v) if aux < v else (v, aux))
            stack.append((s, aux))
        else:
            stack.append((aux, v))
            stack.append((s ^ aux, v))
    assert len(edges) == best, "steiner reconstruction lost or duplicated edges"
    return (best + 1, tuple(sorted(edges)), "dw")
