"""Fission graphs, k-partite graphs and quiver varieties.

Run: python3 demos/graphs_quivers.py
"""

import numpy as np

from wildmoduli import graphs, quiver

# A k-partite irregular type q = a_p z^2 + b z produces the complete k-partite graph.
Q = graphs.kpartite_type([2, 2, 1], [1, 2, 3], [1, 2, 3, 4, 5])
g = graphs.fission_graph(Q)
print("fission graph of the (2,2,1) type:", g.num_nodes, "nodes,", g.num_edges, "edges")
print("equals Gamma(221):", g == graphs.kpartite_graph([2, 2, 1]))

# Affine Dynkin graphs and their null roots give two dimensional quiver varieties.
for name, graph, d in [("A1~", graphs.affine_a1(), [1, 1]), ("D4~", graphs.affine_d4(), [2, 1, 1, 1, 1])]:
    print(f"{name}: Cartan matrix\n{graph.cartan_matrix()}\n  quiver_dim{tuple(d)} = {quiver.quiver_dim(graph, d)}")

# A simple reflection moves the dimension vector but keeps the quiver dimension.
d4 = graphs.affine_d4()
d, lam = np.array([1, 1, 1, 1, 1]), np.array([0, 1, -1, 2, 0])
d1, lam1 = graphs.weyl_reflect(d4, d, lam, 0)
print("reflect at the central node:", d, "->", d1, " lambda", lam, "->", lam1)
print("quiver_dim before/after:", quiver.quiver_dim(d4, d), quiver.quiver_dim(d4, d1))

# The moment map of a random representation has total trace zero.
r = quiver.random_rep(d4, [2, 1, 1, 1, 1], seed=0)
mu = quiver.moment_map(r)
print("sum of traces of mu:", abs(sum(np.trace(m) for m in mu)))
