"""Fission graphs, complete k-partite graphs, supernova legs and Weyl reflections.

Graphs are loop-free undirected multigraphs held as symmetric integer
multiplicity matrices.  Dimension vectors are integer arrays indexed like
the nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .irregular import IrregularType, poly_degree


@dataclass(frozen=True, eq=False)
class Graph:
    nodes: tuple
    adj: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adj, dtype=np.int64)
        nodes = tuple(self.nodes)
        if adj.shape != (len(nodes), len(nodes)):
            raise ValueError(f"adjacency shape {adj.shape} does not match {len(nodes)} nodes")
        if len(set(nodes)) != len(nodes):
            raise ValueError("node ids must be distinct")
        if np.any(adj != adj.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(adj) != 0):
            raise ValueError("graphs must be loop-free")
        if np.any(adj < 0):
            raise ValueError("edge multiplicities must be nonnegative")
        adj.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_edges(cls, nodes, edges):
        """Build from ``(u, v)`` or ``(u, v, mult)`` tuples over node ids."""
        nodes = tuple(nodes)
        index = {v: i for i, v in enumerate(nodes)}
        adj = np.zeros((len(nodes), len(nodes)), dtype=np.int64)
        for e in edges:
            u, v, m = (*e, 1) if len(e) == 2 else e
            adj[index[u], index[v]] += m
            adj[index[v], index[u]] += m
        return cls(nodes, adj)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return int(np.triu(self.adj, 1).sum())

    def edges(self):
        """Oriented edges ``(i, j, copy)`` with ``i < j`` in node order, one per multiplicity."""
        out = []
        for i in range(self.num_nodes):
            for j in range(i + 1, self.num_nodes):
                out.extend((i, j, c) for c in range(int(self.adj[i, j])))
        return out

    def cartan_matrix(self) -> np.ndarray:
        return 2 * np.eye(self.num_nodes, dtype=np.int64) - self.adj

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.nodes == other.nodes and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.nodes, self.adj.tobytes()))

    def __repr__(self):
        return f"Graph(nodes={list(self.nodes)}, edges={self.num_edges})"


def fission_graph(Q: IrregularType) -> Graph:
    """One node per block of ``Q``, ``deg(q_i - q_j) - 1`` edges between nodes."""
    qs = [q for q, _ in Q.blocks]
    N = len(qs)
    adj = np.zeros((N, N), dtype=np.int64)
    for i in range(N):
        for j in range(i):
            m = max(len(qs[i]), len(qs[j]))
            diff = np.zeros(m, dtype=complex)
            diff[:len(qs[i])] += qs[i]
            diff[:len(qs[j])] -= qs[j]
            adj[i, j] = adj[j, i] = poly_degree(diff) - 1
    return Graph(tuple(range(N)), adj)


def _check_partition(parts):
    parts = tuple(int(p) for p in parts)
    if not parts:
        raise ValueError("partition must be nonempty")
    if any(p < 1 for p in parts):
        raise ValueError(f"partition parts must be positive: {parts}")
    return parts


def kpartite_graph(parts) -> Graph:
    """Complete k-partite graph: nodes grouped into parts of the given sizes,
    one edge between nodes in different parts."""
    parts = _check_partition(parts)
    label = np.repeat(np.arange(len(parts)), parts)
    adj = (label[:, None] != label[None, :]).astype(np.int64)
    return Graph(tuple(range(len(label))), adj)


def kpartite_type(parts, a, b) -> IrregularType:
    """Irregular type ``q_{p,i} = a_p z**2 + b_{p,i} z`` whose fission graph is
    the complete k-partite graph on ``parts`` (a pole of order 3).

    ``b`` is a flat list, ``sum(parts)`` long, grouped by part.
    """
    parts = _check_partition(parts)
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    if len(a) != len(parts):
        raise ValueError(f"need {len(parts)} leading coefficients, got {len(a)}")
    if len(b) != sum(parts):
        raise ValueError(f"need {sum(parts)} linear coefficients, got {len(b)}")
    if len(set(a)) != len(a):
        raise ValueError(f"leading coefficients must be distinct across parts: {a}")
    blocks = []
    start = 0
    for p, size in enumerate(parts):
        bp = b[start:start + size]
        if len(set(bp)) != len(bp):
            raise ValueError(f"linear coefficients must be distinct within part {p}: {bp}")
        blocks.extend(((bi, a[p]), 1) for bi in bp)
        start += size
    return IrregularType(tuple(blocks))


def attach_legs(g: Graph, legs) -> Graph:
    """Glue a type A leg of ``legs[i]`` new nodes onto node ``i``.

    Leg nodes are appended after the original nodes, grouped by parent and
    ordered outward; a leg node's id is ``f"{parent}:{step}"``.
    """
    legs = [int(x) for x in legs]
    if len(legs) != g.num_nodes:
        raise ValueError(f"need one leg length per node ({g.num_nodes}), got {len(legs)}")
    if any(x < 0 for x in legs):
        raise ValueError("leg lengths must be nonnegative")
    N = g.num_nodes + sum(legs)
    adj = np.zeros((N, N), dtype=np.int64)
    adj[:g.num_nodes, :g.num_nodes] = g.adj
    nodes = list(g.nodes)
    nxt = g.num_nodes
    for i, length in enumerate(legs):
        prev = i
        for step in range(1, length + 1):
            nodes.append(f"{g.nodes[i]}:{step}")
            adj[prev, nxt] = adj[nxt, prev] = 1
            prev = nxt
            nxt += 1
    return Graph(tuple(nodes), adj)


def _vec(g, d):
    d = np.asarray(d)
    if d.shape != (g.num_nodes,):
        raise ValueError(f"vector of length {d.shape} does not match {g.num_nodes} nodes")
    return d


def cartan_pairing(g: Graph, d, e) -> int:
    """Kac-Moody form ``sum_i 2 d_i e_i - sum_{i != j} mult(i, j) d_i e_j``."""
    d = _vec(g, d).astype(np.int64)
    e = _vec(g, e).astype(np.int64)
    return int(d @ g.cartan_matrix() @ e)


def unit(g: Graph, i) -> np.ndarray:
    e = np.zeros(g.num_nodes, dtype=np.int64)
    e[i] = 1
    return e


def weyl_reflect(g: Graph, d, lam, i):
    """Simple reflection at node ``i`` of a dimension vector and parameters.

    ``d' = d - (d, e_i) e_i`` and ``lam'_j = lam_j - (e_i, e_j) lam_i``.
    """
    d = _vec(g, d).astype(np.int64)
    lam = np.asarray(lam, dtype=complex)
    if lam.shape != (g.num_nodes,):
        raise ValueError("parameter vector does not match node count")
    C = g.cartan_matrix()
    d_new = d - int(d @ C[:, i]) * unit(g, i)
    lam_new = lam - C[i] * lam[i]
    return d_new, lam_new


def affine_a1() -> Graph:
    """Two nodes joined by a double edge."""
    return Graph((0, 1), [[0, 2], [2, 0]])


def affine_d4() -> Graph:
    """Star with a central node 0 and four single-node legs."""
    return Graph.from_edges(range(5), [(0, 1), (0, 2), (0, 3), (0, 4)])
