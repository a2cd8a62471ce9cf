# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels; mirrors xpand._kernels_py exactly.

Masks are 64-bit here, so the dispatcher only routes instances with
n <= 63 this way. Results must stay bit-identical to the reference."""

from libc.stdlib cimport free, malloc

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

INF = 1 << 30
BACKEND_NAME = "cython"

cdef int _INF = 1 << 30
ctypedef unsigned long long u64


cdef u64* _adj_array(int n, object adj) except NULL:
    cdef u64* a = <u64*> malloc(n * sizeof(u64))
    if a == NULL:
        raise MemoryError()
    cdef int v
    for v in range(n):
        a[v] = <u64> adj[v]
    return a


def adjacency_masks(adjacency):
    masks = []
    for nbrs in adjacency:
        m = 0
        for u in nbrs:
            m |= 1 << u
        masks.append(m)
    return masks


cdef u64 _flood_c(u64 start, u64 allowed, u64* adj) nogil:
    cdef u64 reached = start & allowed
    cdef u64 frontier = reached
    cdef u64 nxt, m
    while frontier:
        nxt = 0
        m = frontier
        while m:
            nxt |= adj[__builtin_ctzll(m)]
            m &= m - 1
        frontier = nxt & allowed & ~reached
        reached |= frontier
    return reached


def mask_connected(mask, adj):
    cdef int n = len(adj)
    cdef u64 m = <u64> mask
    if m == 0:
        return False
    cdef u64* a = _adj_array(n, adj)
    cdef u64 r
    try:
        r = _flood_c(m & (~m + 1), m, a)
        return r == m
    finally:
        free(a)


cdef bint _better_c(long long b1, long long s1, u64 m1,
                    long long b2, long long s2, u64 m2) nogil:
    cdef long long lhs = b1 * s2
    cdef long long rhs = b2 * s1
    cdef u64 diff
    if lhs != rhs:
        return lhs < rhs
    if s1 != s2:
        return s1 < s2
    if m1 == m2:
        return False
    diff = m1 ^ m2
    return (m1 & (diff & (~diff + 1))) != 0


def min_ratio_node_cut(n, adj, max_size):
    """Minimize |outer node boundary| / |S| over 1 <= |S| <= max_size.

    Full sweep over all subsets; node-boundary minimizers need not be
    connected. Returns (boundary_size, set_size, set_mask) or None.
    """
    cdef int cn = n
    cdef int cmax = max_size
    if cn < 1 or cmax < 1:
        return None
    cdef u64* a = _adj_array(cn, adj)
    cdef u64 total = (<u64> 1) << cn
    cdef u64 mask = 1, m, nbr, best_mask = 0
    cdef int size, bnd
    cdef long long best_bnd = -1, best_size = 0
    try:
        with nogil:
            while mask < total:
                size = __builtin_popcountll(mask)
                if size <= cmax:
                    nbr = 0
                    m = mask
                    while m:
                        nbr |= a[__builtin_ctzll(m)]
                        m &= m - 1
                    bnd = __builtin_popcountll(nbr & ~mask)
                    if best_bnd < 0 or _better_c(bnd, size, mask,
                                                 best_bnd, best_size, best_mask):
                        best_bnd = bnd
                        best_size = size
                        best_mask = mask
                mask += 1
    finally:
        free(a)
    if best_bnd < 0:
        return None
    return (int(best_bnd), int(best_size), int(best_mask))


def min_ratio_edge_cut(n, adj, max_size):
    """Minimize |edge boundary| / |S| over 1 <= |S| <= max_size.

    Sweeps all subsets. The canonical winner is always connected: any
    disconnected S has a component with ratio <= ratio(S) and smaller
    size, so it loses the (ratio, size) tie-break.
    Returns (cut_size, set_size, set_mask) or None.
    """
    cdef int cn = n
    cdef int cmax = max_size
    if cn < 1 or cmax < 1:
        return None
    cdef u64* a = _adj_array(cn, adj)
    cdef u64 total = (<u64> 1) << cn
    cdef u64 mask = 1, m, best_mask = 0
    cdef int size, cut
    cdef long long best_cut = -1, best_size = 0
    try:
        with nogil:
            while mask < total:
                size = __builtin_popcountll(mask)
                if size <= cmax:
                    cut = 0
                    m = mask
                    while m:
                        cut += __builtin_popcountll(a[__builtin_ctzll(m)] & ~mask)
                        m &= m - 1
                    if best_cut < 0 or _better_c(cut, size, mask,
                                                 best_cut, best_size, best_mask):
                        best_cut = cut
                        best_size = size
                        best_mask = mask
                mask += 1
    finally:
        free(a)
    if best_cut < 0:
        return None
    return (int(best_cut), int(best_size), int(best_mask))


def compact_masks(n, adj):
    """Masks U with induced(U) and induced(V minus U) both connected.

    Ascending numeric mask order; this is the canonical enumeration
    order wherever compact sets are walked or reported.
    """
    cdef int cn = n
    if cn < 2:
        return []
    cdef u64* a = _adj_array(cn, adj)
    cdef u64 total = (<u64> 1) << cn
    cdef u64 full = total - 1
    cdef char* conn = <char*> malloc(<size_t> total)
    cdef u64 m, low
    out = []
    if conn == NULL:
        free(a)
        raise MemoryError()
    try:
        with nogil:
            conn[0] = 0
            m = 1
            while m < total:
                low = m & (~m + 1)
                conn[m] = 1 if _flood_c(low, m, a) == m else 0
                m += 1
        m = 1
        while m < full:
            if conn[m] and conn[full ^ m]:
                out.append(int(m))
            m += 1
    finally:
        free(conn)
        free(a)
    return out


cdef bint _conn_rec(u64 s, u64 ext, u64 banned, u64 allowed,
                    u64* adj, list out, long long cap):
    cdef u64 u, grown, new_ext
    if ext == 0:
        out.append(int(s))
        return len(out) <= cap
    u = ext & (~ext + 1)
    grown = s | u
    new_ext = (ext | (adj[__builtin_ctzll(u)] & allowed & ~banned)) & ~grown
    if not _conn_rec(grown, new_ext, banned, allowed, adj, out, cap):
        return False
    return _conn_rec(s, ext ^ u, banned | u, allowed, adj, out, cap)


def connected_masks(n, adj, cap):
    """Masks of nonempty connected induced subgraphs, ascending.

    Returns None as soon as more than cap sets exist. Enumeration roots
    each set at its smallest node and branches on including or banning
    one frontier node at a time, so each set is emitted exactly once.
    """
    cdef int cn = n
    cdef u64* a = _adj_array(cn, adj)
    cdef u64 full = ((<u64> 1) << cn) - 1
    cdef u64 rootbit, allowed
    cdef int root
    cdef long long ccap = cap
    out = []
    try:
        for root in range(cn):
            rootbit = (<u64> 1) << root
            allowed = full & ~(rootbit - 1)
            if not _conn_rec(rootbit, a[root] & allowed & ~rootbit, 0,
                             allowed, a, out, ccap):
                return None
    finally:
        free(a)
    out.sort()
    return out


cdef int _dsu_find(int* parent, int v) nogil:
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


cdef tuple _kruskal_lex_c(u64 w, u64* adj, int n):
    cdef int* parent = <int*> malloc(n * sizeof(int))
    if parent == NULL:
        raise MemoryError()
    cdef int u, v, ru, rv
    cdef u64 m, inner
    edges = []
    try:
        for u in range(n):
            parent[u] = u
        m = w
        while m:
            u = __builtin_ctzll(m)
            m &= m - 1
            inner = adj[u] & w
            while inner:
                v = __builtin_ctzll(inner)
                inner &= inner - 1
                if v > u:
                    ru = _dsu_find(parent, u)
                    rv = _dsu_find(parent, v)
                    if ru != rv:
                        parent[rv] = ru
                        edges.append((u, v))
    finally:
        free(parent)
    return tuple(edges)


def steiner_min_tree(n, adj, terminals):
    """Minimum-node tree spanning the terminals.

    Returns (node_count, edges, method) or None when the terminals do
    not share a component. Small instances take the superset sweep,
    whose tie-break is the exact lex-min tree over all minimum node
    sets; larger ones take subset DP, which is deterministic but only
    guarantees some minimum tree.
    """
    terms = tuple(sorted({int(v) for v in terminals}))
    cdef int t = len(terms)
    assert t >= 1
    cdef int cn = n
    cdef u64* a = _adj_array(cn, adj)
    cdef u64 full = ((<u64> 1) << cn) - 1
    cdef u64 reach
    try:
        reach = _flood_c((<u64> 1) << terms[0], full, a)
        for v in terms:
            if not (reach >> <int> v) & 1:
                return None
        if t == 1:
            return (1, (), "trivial")
        free_n = cn - t
        if free_n <= 22 and (1 << free_n) <= 4 * 3**t:
            return _steiner_sweep_c(cn, a, terms)
        assert t <= 16
        return _steiner_dw_c(cn, a, terms)
    finally:
        free(a)


cdef tuple _steiner_sweep_c(int n, u64* adj, tuple terms):
    cdef u64 tmask = 0
    cdef int v
    for v in terms:
        tmask |= (<u64> 1) << v
    cdef u64 free_mask = (((<u64> 1) << n) - 1) & ~tmask
    cdef int best_size = _INF
    cdef u64 sub = free_mask
    cdef u64 w
    cdef int size
    ties = []
    while True:
        w = tmask | sub
        size = __builtin_popcountll(w)
        if size <= best_size and _flood_c(w & (~w + 1), w, adj) == w:
            if size < best_size:
                best_size = size
                ties = [w]
            else:
                ties.append(w)
        if sub == 0:
            break
        sub = (sub - 1) & free_mask
    if best_size >= _INF:
        return None
    best_edges = None
    ties.sort()
    for wm in ties:
        edges = _kruskal_lex_c(<u64> wm, adj, n)
        if best_edges is None or edges < best_edges:
            best_edges = edges
    return (best_size, best_edges, "sweep")


cdef tuple _steiner_dw_c(int n, u64* adj, tuple terms):
    cdef int t = len(terms)
    cdef int full_ts = (1 << t) - 1
    cdef int nbuckets = 2 * n + 2
    cdef size_t states = <size_t> (full_ts + 1) * n
    cdef int* dp = <int*> malloc(states * sizeof(int))
    # parent per state: kind -1 none / 0 edge / 1 merge, aux node or submask
    cdef signed char* pkind = <signed char*> malloc(states)
    cdef int* paux = <int*> malloc(states * sizeof(int))
    cdef int* buckets = <int*> malloc(<size_t> nbuckets * n * sizeof(int))
    cdef int* bcount = <int*> malloc(nbuckets * sizeof(int))
    if dp == NULL or pkind == NULL or paux == NULL or buckets == NULL or bcount == NULL:
        free(dp); free(pkind); free(paux); free(buckets); free(bcount)
        raise MemoryError()
    cdef int s, v, i, low, sub, rest, aa, bb, d, bi, u, cand, best
    cdef u64 m
    cdef size_t off, offsub, offrest
    try:
        with nogil:
            for off in range(states):
                dp[off] = _INF
                pkind[off] = -1
                paux[off] = 0
        for i in range(t):
            dp[(<size_t> (1 << i)) * n + <int> terms[i]] = 0
        with nogil:
            for s in range(1, full_ts + 1):
                off = (<size_t> s) * n
                if s & (s - 1):
                    low = s & (-s)
                    sub = (s - 1) & s
                    while sub:
                        if sub & low:
                            rest = s ^ sub
                            offsub = (<size_t> sub) * n
                            offrest = (<size_t> rest) * n
                            for v in range(n):
                                aa = dp[offsub + v]
                                bb = dp[offrest + v]
                                if aa < _INF and bb < _INF and aa + bb < dp[off + v]:
                                    dp[off + v] = aa + bb
                                    pkind[off + v] = 1
                                    paux[off + v] = sub
                        sub = (sub - 1) & s
                for d in range(nbuckets):
                    bcount[d] = 0
                for v in range(n):
                    d = dp[off + v]
                    if d < nbuckets:
                        buckets[d * n + bcount[d]] = v
                        bcount[d] += 1
                for d in range(nbuckets - 1):
                    bi = 0
                    while bi < bcount[d]:
                        v = buckets[d * n + bi]
                        bi += 1
                        if dp[off + v] != d:
                            continue
                        m = adj[v]
                        while m:
                            u = __builtin_ctzll(m)
                            m &= m - 1
                            if d + 1 < dp[off + u]:
                                dp[off + u] = d + 1
                                pkind[off + u] = 0
                                paux[off + u] = v
                                buckets[(d + 1) * n + bcount[d + 1]] = u
                                bcount[d + 1] += 1
        best = dp[(<size_t> full_ts) * n + <int> terms[0]]
        if best >= _INF:
            return None
        edges = set()
        stack = [(full_ts, int(terms[0]))]
        while stack:
            s, v = stack.pop()
            off = (<size_t> s) * n
            if pkind[off + v] == -1:
                continue
            aa = paux[off + v]
            if pkind[off + v] == 0:
                edges.add((aa, v) if aa < v else (v, aa))
                stack.append((s, aa))
            else:
                stack.append((aa, v))
                stack.append((s ^ aa, v))
        assert len(edges) == best, "steiner reconstruction lost or duplicated edges"
        return (best + 1, tuple(sorted(edges)), "dw")
    finally:
        free(dp); free(pkind); free(paux); free(buckets); free(bcount)
