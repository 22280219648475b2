import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wildmoduli.graphs import (Graph, affine_a1, affine_d4, attach_legs, cartan_pairing, fission_graph,
                               kpartite_graph, kpartite_type, unit, weyl_reflect)
from wildmoduli.irregular import IrregularType


def brute_pairing(g, d, e):
    """(d, e) = sum 2 d_i e_i - sum_{i != j} mult(i, j) d_i e_j, by explicit double loop."""
    total = 0
    for i in range(g.num_nodes):
        total += 2 * int(d[i]) * int(e[i])
        for j in range(g.num_nodes):
            if i != j:
                total -= int(g.adj[i, j]) * int(d[i]) * int(e[j])
    return total


def test_fission_graph_examples():
    Q = IrregularType((([0.3, -1.0, 2.0], 1), ([0.1, 0.5, -2.0], 1)))
    g = fission_graph(Q)
    assert g.num_nodes == 2 and g.adj[0, 1] == 2
    Q = IrregularType(tuple((([c], 1)) for c in (1.0, 2.0, 3.5, -1.0)))
    g = fission_graph(Q)
    assert g.num_nodes == 4 and g.num_edges == 0
    Q = kpartite_type((2, 2, 1), (1, 2, 3), (1, 2, 1, 2, 5))
    assert fission_graph(Q).num_edges == 8


def test_kpartite_graph_examples():
    g = kpartite_graph((1, 1))
    assert g.num_nodes == 2 and g.num_edges == 1
    g = kpartite_graph((2, 2, 1))
    assert g.num_nodes == 5 and g.num_edges == 8
    assert kpartite_graph((3,)).num_edges == 0
    with pytest.raises(ValueError):
        kpartite_graph(())
    with pytest.raises(ValueError):
        kpartite_graph((2, 0))


def test_kpartite_type_examples():
    Q = kpartite_type((1, 1), (1, -1), (0, 0))
    qs = [list(q) for q, _ in Q.blocks]
    assert qs == [[0, 1], [0, -1]]
    assert fission_graph(Q).num_edges == 1
    g = fission_graph(kpartite_type((2, 1), (0, 1), (1, 2, 0)))
    assert g.num_nodes == 3 and g.num_edges == 2 and g.adj[0, 1] == 0
    with pytest.raises(ValueError):
        kpartite_type((1, 1), (1, 1), (0, 2))
    with pytest.raises(ValueError):
        kpartite_type((2,), (1,), (3, 3))


partitions = st.lists(st.integers(1, 4), min_size=1, max_size=4)


@given(partitions, st.integers(0, 2**31))
def test_kpartite_round_trip(parts, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(len(parts)) + 1j * rng.standard_normal(len(parts))
    b = rng.standard_normal(sum(parts)) + 1j * rng.standard_normal(sum(parts))
    assert fission_graph(kpartite_type(parts, a, b)) == kpartite_graph(parts)


def test_attach_legs_examples():
    g = kpartite_graph((2, 1))
    assert attach_legs(g, [0, 0, 0]) == g
    path = attach_legs(Graph((0,), [[0]]), [3])
    assert path.num_nodes == 4 and path.num_edges == 3
    assert list(path.nodes) == [0, "0:1", "0:2", "0:3"]
    assert sorted(path.adj.sum(axis=0)) == [1, 1, 2, 2]
    assert attach_legs(affine_a1(), [0, 0]) == affine_a1()
    with pytest.raises(ValueError):
        attach_legs(g, [1, 2])


@given(partitions, st.data())
def test_attach_legs_properties(parts, data):
    g = kpartite_graph(parts)
    legs = data.draw(st.lists(st.integers(0, 3), min_size=g.num_nodes, max_size=g.num_nodes))
    h = attach_legs(g, legs)
    assert h.num_nodes == g.num_nodes + sum(legs)
    assert np.array_equal(h.adj[:g.num_nodes, :g.num_nodes], g.adj)
    assert h.num_edges == g.num_edges + sum(legs)


def test_cartan_pairing_examples():
    single = Graph((0,), [[0]])
    assert cartan_pairing(single, [1], [1]) == 2
    assert cartan_pairing(affine_a1(), [1, 1], [1, 1]) == 0
    assert cartan_pairing(affine_d4(), [2, 1, 1, 1, 1], [2, 1, 1, 1, 1]) == 0


def random_graph(rng, n):
    adj = np.triu(rng.integers(0, 3, size=(n, n)), 1)
    return Graph(tuple(range(n)), adj + adj.T)


@given(st.integers(0, 2**31), st.integers(1, 6))
def test_cartan_pairing_symmetric_integer(seed, n):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    d, e = rng.integers(-3, 4, size=n), rng.integers(-3, 4, size=n)
    val = cartan_pairing(g, d, e)
    assert isinstance(val, int)
    assert val == cartan_pairing(g, e, d) == brute_pairing(g, d, e)
    for i in range(n):
        assert cartan_pairing(g, unit(g, i), unit(g, i)) == 2


def test_weyl_reflect_examples():
    g = affine_d4()
    d, _ = weyl_reflect(g, unit(g, 2), np.zeros(5), 2)
    assert list(d) == list(-unit(g, 2))
    d, _ = weyl_reflect(affine_a1(), [1, 1], [0, 0], 0)
    assert list(d) == [1, 1]
    # (d, e_c) = 2 - 4 = -2, so the centre entry becomes 1 + 2 = 3
    assert brute_pairing(g, [1, 1, 1, 1, 1], unit(g, 0)) == -2
    d, _ = weyl_reflect(g, [1, 1, 1, 1, 1], np.zeros(5), 0)
    assert list(d) == [3, 1, 1, 1, 1]


def test_weyl_reflect_parameters():
    g = affine_d4()
    lam = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    _, lam2 = weyl_reflect(g, [1, 1, 1, 1, 1], lam, 0)
    # lam'_j = lam_j - (e_0, e_j) lam_0
    assert np.allclose(lam2, [-1.0, 3.0, 4.0, 5.0, 6.0])
    # the trace condition sum lam_i d_i is preserved
    d = np.array([1, 1, 1, 1, 1])
    d2, lam2 = weyl_reflect(g, d, lam, 0)
    assert lam2 @ d2 == pytest.approx(lam @ d)


@given(st.integers(0, 2**31), st.integers(1, 6))
def test_weyl_involution_and_invariance(seed, n):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    d = rng.integers(0, 5, size=n)
    lam = rng.integers(-5, 6, size=n) + 1j * rng.integers(-5, 6, size=n)
    i = int(rng.integers(n))
    d1, lam1 = weyl_reflect(g, d, lam, i)
    d2, lam2 = weyl_reflect(g, d1, lam1, i)
    assert np.array_equal(d2, d) and np.array_equal(lam2, lam)
    assert cartan_pairing(g, d1, d1) == cartan_pairing(g, d, d)


@given(st.integers(0, 2**31), st.integers(1, 6))
def test_weyl_involution_complex_lambda(seed, n):
    # exact for integral lambda; generic complex lambda returns up to round-off
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    lam = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    i = int(rng.integers(n))
    d = rng.integers(0, 5, size=n)
    _, lam2 = weyl_reflect(g, *weyl_reflect(g, d, lam, i), i)
    assert np.allclose(lam2, lam, atol=1e-12 * (1 + np.abs(lam).max()) * (1 + g.adj.sum()))


def test_graph_validation_and_equality():
    with pytest.raises(ValueError):
        Graph((0, 1), [[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        Graph((0,), [[1]])
    with pytest.raises(ValueError):
        Graph((0, 0), [[0, 1], [1, 0]])
    g = Graph.from_edges("ab", [("a", "b", 2)])
    assert g == affine_a1().__class__(("a", "b"), [[0, 2], [2, 0]])
    assert hash(g) == hash(Graph(("a", "b"), [[0, 2], [2, 0]]))
    assert g.edges() == [(0, 1, 0), (0, 1, 1)]


def test_kpartite_small_cases_exhaustive():
    for parts in itertools.product(range(1, 4), repeat=3):
        g = kpartite_graph(parts)
        n = sum(parts)
        assert g.num_edges == (n * n - sum(p * p for p in parts)) // 2
