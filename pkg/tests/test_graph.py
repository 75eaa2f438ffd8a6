import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgraph import GraphConstructionError, build_discrete_graph, cycle_graph, interval, metric_graph, neighborhood, star_graph
from qgraph.graph import BondBasis

from conftest import random_connected_graph


def test_single_edge_adjacency():
    g = build_discrete_graph(2, [(1, 2)])
    np.testing.assert_array_equal(g.adjacency, [[0, 1], [1, 0]])


def test_star_degrees():
    g = build_discrete_graph(4, [(1, 2), (1, 3), (1, 4)])
    assert [g.degree(v) for v in g.vertices] == [3, 1, 1, 1]


@pytest.mark.parametrize("n, edges, fragment", [
    (3, [(1, 2)], "disconnected"),
    (2, [(1, 1)], "self-loop"),
    (3, [(1, 2), (2, 1), (2, 3)], "duplicate"),
    (2, [(1, 3)], "out of range"),
])
def test_construction_errors_name_the_offender(n, edges, fragment):
    with pytest.raises(GraphConstructionError, match=fragment):
        build_discrete_graph(n, edges)


def test_disconnected_reports_isolated_vertex():
    with pytest.raises(GraphConstructionError, match=r"\[3\]"):
        build_discrete_graph(3, [(1, 2)])


def test_neighborhood():
    g = star_graph(4)
    assert neighborhood(g, 1) == {2, 3, 4}
    assert neighborhood(g, 1, exclude=3) == {2, 4}
    assert neighborhood(g, 2) == {1}
    with pytest.raises(GraphConstructionError):
        neighborhood(g, 7)


def test_bond_ordering():
    assert interval().basis.bonds == ((1, 2), (2, 1))
    assert star_graph(3).basis.bonds == ((1, 2), (2, 1), (1, 3), (3, 1))
    tri = metric_graph(3, [(1, 2), (1, 3), (2, 3)], 1.0)
    assert tri.basis.bonds == ((1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2))


def test_bond_basis_is_stable():
    a = metric_graph(4, [(3, 4), (1, 2), (2, 3)], [1.0, 2.0, 3.0])
    b = metric_graph(4, [(3, 4), (1, 2), (2, 3)], [1.0, 2.0, 3.0])
    assert a.basis.bonds == b.basis.bonds
    np.testing.assert_array_equal(a.basis.lengths, [1, 1, 2, 2, 3, 3])


@pytest.mark.parametrize("bad", [0.0, -1.0, float("inf"), float("nan")])
def test_lengths_must_be_positive_and_finite(bad):
    with pytest.raises(GraphConstructionError, match="length"):
        metric_graph(2, [(1, 2)], [bad])


def test_leads_validation():
    with pytest.raises(GraphConstructionError):
        interval(leads=(1, 1))
    with pytest.raises(GraphConstructionError):
        interval(leads=(1, 5))
    g = star_graph(3, leads=(1, 3))
    assert g.lead_degree(1) == 3 and g.lead_degree(3) == 2 and g.lead_degree(2) == 1
    assert g.closed().leads is None


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 7))
def test_graph_invariants(seed, n):
    g = random_connected_graph(np.random.default_rng(seed), n)
    topo = g.topology
    A = topo.adjacency
    assert (A == A.T).all() and not A.diagonal().any()
    assert A.sum() == 2 * len(topo.edges)
    assert topo.degrees.sum() == 2 * len(topo.edges)
    for i in topo.vertices:
        assert neighborhood(topo, i) == {j for j in topo.vertices if A[i - 1, j - 1]}
    basis = g.basis
    for b in range(len(basis)):
        assert BondBasis.reverse(BondBasis.reverse(b)) == b
        t, h = basis.bonds[b]
        assert basis.bonds[BondBasis.reverse(b)] == (h, t)
        assert A[t - 1, h - 1] == 1
        assert basis.index(t, h) == b


def test_cycle_edges():
    g = cycle_graph(4)
    assert g.edges == ((1, 2), (2, 3), (3, 4), (1, 4))
