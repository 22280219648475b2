"""Doubled-quiver representations of a graph and their moment maps.

Every edge ``{i, j}`` (``i < j`` in node order, once per multiplicity) is
oriented ``i -> j`` and carries a pair ``x: V_i -> V_j``, ``y: V_j -> V_i``.
The group ``prod_i GL(V_i)`` acts by ``x -> g_j x g_i^-1``,
``y -> g_i y g_j^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, cartan_pairing


@dataclass(frozen=True, eq=False)
class GraphRep:
    graph: Graph
    dims: tuple
    xs: tuple
    ys: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != self.graph.num_nodes or any(d < 0 for d in dims):
            raise ValueError(f"bad dimension vector {dims} for {self.graph.num_nodes} nodes")
        edges = self.graph.edges()
        if len(self.xs) != len(edges) or len(self.ys) != len(edges):
            raise ValueError(f"need {len(edges)} map pairs, got {len(self.xs)}/{len(self.ys)}")
        xs, ys = [], []
        for (i, j, _), x, y in zip(edges, self.xs, self.ys):
            x = np.array(x, dtype=complex).reshape(dims[j], dims[i])
            y = np.array(y, dtype=complex).reshape(dims[i], dims[j])
            x.setflags(write=False)
            y.setflags(write=False)
            xs.append(x)
            ys.append(y)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "xs", tuple(xs))
        object.__setattr__(self, "ys", tuple(ys))

    def act(self, gs) -> "GraphRep":
        """Apply ``(g_i)`` in ``prod GL(V_i)``."""
        inv = [np.linalg.inv(g) if g.size else g for g in gs]
        xs, ys = [], []
        for (i, j, _), x, y in zip(self.graph.edges(), self.xs, self.ys):
            xs.append(gs[j] @ x @ inv[i])
            ys.append(gs[i] @ y @ inv[j])
        return GraphRep(self.graph, self.dims, tuple(xs), tuple(ys))


def rep_space_dim(g: Graph, d) -> int:
    """``2 sum_edges d_i d_j``, the dimension of the doubled representation space."""
    d = np.asarray(d, dtype=np.int64)
    return int(d @ g.adj @ d)


def random_rep(g: Graph, d, seed) -> GraphRep:
    """Representation with standard complex Gaussian entries drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    d = [int(x) for x in d]
    xs, ys = [], []
    for i, j, _ in g.edges():
        xs.append(rng.standard_normal((d[j], d[i])) + 1j * rng.standard_normal((d[j], d[i])))
        ys.append(rng.standard_normal((d[i], d[j])) + 1j * rng.standard_normal((d[i], d[j])))
    return GraphRep(g, d, tuple(xs), tuple(ys))


def moment_map(r: GraphRep):
    """``mu_i = sum_{i->j} -y x + sum_{j->i} x y``, one ``d_i x d_i`` matrix per node."""
    mu = [np.zeros((d, d), dtype=complex) for d in r.dims]
    for (i, j, _), x, y in zip(r.graph.edges(), r.xs, r.ys):
        mu[i] -= y @ x
        mu[j] += x @ y
    return mu


def quiver_dim(g: Graph, d) -> int:
    """Expected dimension ``2 - (d, d)`` of the quiver variety for ``d``.

    Cross-checked against ``dim Rep - 2 (dim prod GL(V_i) - 1)``.
    """
    d = np.asarray(d, dtype=np.int64)
    if not d.any():
        raise ValueError("dimension vector must be nonzero")
    dim = 2 - cartan_pairing(g, d, d)
    other = rep_space_dim(g, d) - 2 * (int(d @ d) - 1)
    if dim != other:
        raise AssertionError(f"quiver dimension mismatch: {dim} vs {other}")
    return dim


def trace_condition(lam, d) -> complex:
    """``sum_i lam_i d_i``; must vanish for ``mu = lam`` to have solutions."""
    lam = np.asarray(lam, dtype=complex)
    d = np.asarray(d)
    if lam.shape != d.shape:
        raise ValueError("parameter and dimension vectors differ in length")
    return complex(lam @ d)
