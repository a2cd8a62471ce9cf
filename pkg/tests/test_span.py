"""Steiner trees, compact-set enumeration, span, and mesh certificates."""

from fractions import Fraction

import pytest

from xpand.errors import (
    InputError,
    LimitError,
    NoSteinerTreeError,
    SamplingError,
)
from xpand.generators import complete, cycle, mesh, mesh_coords, path
from xpand.graph import Graph, is_compact, node_boundary
from xpand.span import (
    enumerate_compact_sets,
    expand_virtual_edge,
    mesh_virtual_boundary_graph,
    span_exact,
    span_sampled,
    steiner_tree_min,
    verify_mesh_span_certificate,
)

from oracles import steiner_node_count_nx

F = Fraction


def test_steiner_base_cases():
    assert steiner_tree_min(cycle(8), [3]) == (1, ())
    assert steiner_tree_min(cycle(8), [3, 5]) == (3, ((3, 4), (4, 5)))
    # cross terminals of the 3x3 mesh meet at the center
    count, edges = steiner_tree_min(mesh([3, 3]), [1, 3, 5, 7])
    assert count == 5
    assert edges == ((1, 4), (3, 4), (4, 5), (4, 7))


def test_steiner_matches_brute_force():
    for g in (cycle(8), mesh([3, 3]), complete(5), path(7)):
        for terms in ([0, g.n - 1], [0, g.n // 2, g.n - 1]):
            count, edges = steiner_tree_min(g, terms)
            assert count == steiner_node_count_nx(g, terms)
            assert len(edges) == count - 1
            touched = {v for e in edges for v in e} or set(terms[:1])
            assert set(terms) <= touched


def test_steiner_errors():
    gd = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(NoSteinerTreeError):
        steiner_tree_min(gd, [0, 3])
    with pytest.raises(LimitError):
        steiner_tree_min(mesh([4, 4]), list(range(15)))
    with pytest.raises(InputError):
        steiner_tree_min(cycle(8), [])


def test_enumerate_compact_sets():
    assert sorted(enumerate_compact_sets(path(4))) == [
        (0,),
        (0, 1),
        (0, 1, 2),
        (1, 2, 3),
        (2, 3),
        (3,),
    ]
    c5 = enumerate_compact_sets(cycle(5))
    assert len(c5) == 20  # 5 arcs per length 1..4
    assert len(enumerate_compact_sets(complete(4))) == 14  # all proper nonempty
    # closed under complement
    g = mesh([3, 3])
    sets = set(enumerate_compact_sets(g))
    for s in sets:
        comp = tuple(v for v in range(g.n) if v not in s)
        assert comp in sets
        assert is_compact(g, s)


def test_span_frozen_values():
    assert span_exact(complete(5)).value == 1
    assert span_exact(path(6)).value == 1
    r = span_exact(cycle(6))
    assert (r.value, r.argmax) == (F(2), (0, 1))
    r = span_exact(mesh([3, 3]))
    assert (r.value, r.argmax) == (F(5, 3), (0, 1, 3))
    assert r.boundary == (2, 4, 6)
    r = span_exact(mesh([4, 4]))
    assert (r.value, r.argmax) == (F(7, 4), (0, 1, 2, 4, 5, 8))
    assert r.boundary == (3, 6, 9, 12)
    assert r.tree_size == 7 and len(r.tree_edges) == 6


def test_span_report_certificate_is_consistent():
    for g in (cycle(6), mesh([3, 3]), mesh([4, 4])):
        r = span_exact(g)
        assert r.boundary == node_boundary(g, r.argmax)
        assert r.value == F(r.tree_size, len(r.boundary))
        touched = {v for e in r.tree_edges for v in e} or set(r.boundary)
        assert set(r.boundary) <= touched
        assert len(r.tree_edges) == r.tree_size - 1 or r.tree_size == 1
        assert r.value >= 1  # a tree through t terminals has >= t nodes
        payload = r.to_payload()
        assert payload["boundary"] == list(r.boundary)
        assert payload["tree_edges"] == [list(e) for e in r.tree_edges]


def test_span_is_isomorphism_invariant():
    g = mesh([3, 3])
    perm = {v: mesh_coords((3, 3), v)[1] * 3 + mesh_coords((3, 3), v)[0] for v in range(9)}
    h = Graph.from_edges(9, [(perm[u], perm[v]) for u, v in g.edges()])
    assert span_exact(h).value == span_exact(g).value


def test_span_sampled_lower_bounds_exact():
    exact = span_exact(mesh([4, 4])).value
    r = span_sampled(mesh([4, 4]), 300, seed=2)
    assert r.value <= exact
    assert r.method == "sampled"
    again = span_sampled(mesh([4, 4]), 300, seed=2)
    assert (r.value, r.argmax) == (again.value, again.argmax)
    assert r.boundary == node_boundary(mesh([4, 4]), r.argmax)


def test_span_sampled_error_when_nothing_usable():
    with pytest.raises(SamplingError):
        span_sampled(cycle(8), 5, seed=0, terminal_limit=0)
    with pytest.raises(InputError):
        span_sampled(cycle(8), 0, seed=0)


def test_span_limits():
    with pytest.raises(LimitError):
        span_exact(mesh([5, 5]))
    with pytest.raises(InputError):
        span_exact(Graph.from_edges(4, [(0, 1), (2, 3)]))  # disconnected


def test_mesh_virtual_boundary_graph():
    v = mesh_virtual_boundary_graph((3, 3), [1, 3, 5, 7])
    assert v.n == 4
    assert sorted(v.edges()) == [(0, 1), (0, 2), (1, 3), (2, 3)]
    assert v.node_map == (1, 3, 5, 7)
    # neighbors of a corner in the 2-cube: pairwise within distance 2
    v2 = mesh_virtual_boundary_graph((2, 2, 2), [1, 2, 4])
    assert sorted(v2.edges()) == [(0, 1), (0, 2), (1, 2)]
    # boundary of a 2x2 corner block in the 4x4 mesh stays connected
    from xpand.graph import is_connected

    block = [0, 1, 4, 5]
    bnd = node_boundary(mesh([4, 4]), block)
    assert is_connected(mesh_virtual_boundary_graph((4, 4), bnd))


def test_expand_virtual_edge():
    assert expand_virtual_edge((3, 3), 0, 1) == ()  # already adjacent
    assert expand_virtual_edge((3, 3), 1, 3) == (4,)
    assert expand_virtual_edge((3, 3), 1, 5) == (4,)
    # connector must stitch the pair into a real path
    g = mesh([3, 3])
    for u, v in [(1, 3), (1, 5), (0, 4)]:
        mid = expand_virtual_edge((3, 3), u, v)
        assert len(mid) <= 1
        if mid:
            assert g.has_edge(u, mid[0]) and g.has_edge(mid[0], v)
    with pytest.raises(InputError):
        expand_virtual_edge((3, 3), 0, 8)  # too far apart


def test_mesh_span_certificate():
    cert = verify_mesh_span_certificate((3, 3), exhaustive=True)
    assert cert.ok and cert.failures == ()
    assert (cert.checked, cert.max_ratio) == (106, F(5, 3))
    cert44 = verify_mesh_span_certificate((4, 4), exhaustive=True)
    assert cert44.ok
    assert (cert44.checked, cert44.max_ratio) == (1254, F(9, 5))
    assert cert44.max_ratio <= 2  # the mesh span bound


def test_mesh_span_certificate_sampled():
    cert = verify_mesh_span_certificate((5, 5), exhaustive=False, samples=150, seed=1)
    assert cert.ok
    assert cert.max_ratio <= 2
    assert cert.checked <= 150
