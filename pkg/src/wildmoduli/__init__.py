"""Wild character varieties and meromorphic Hitchin systems, numerically.

Modules: ``jetcore`` (truncated jets and their duals), ``irregular``
(irregular types, orbits, dimension counts), ``graphs`` and ``quiver``
(fission/supernova graphs, quiver varieties), ``betti`` (character
varieties, Stokes fibres, cubic surfaces), ``rational`` and ``spectral``
(rational matrices, Hitchin invariants, flows, monodromy) and ``cli``.
"""

__version__ = "0.1.0"

from .jetcore import Jet, PrincipalPart, coadjoint_action, residue_pairing
from .irregular import (CurveSpec, GroupSpec, IrregularType, MarkedPoint, ResidueData,
                        mstar_dim, orbit_dim, very_good_point)
from .graphs import Graph, attach_legs, fission_graph, kpartite_graph, kpartite_type, weyl_reflect
from .quiver import GraphRep, moment_map, quiver_dim, random_rep
from .rational import RationalMatrix
from .spectral import (isospectral_flow, lie_poisson_bracket, monodromy, schlesinger_flow,
                       spectral_invariants)

__all__ = [
    "Jet", "PrincipalPart", "coadjoint_action", "residue_pairing",
    "CurveSpec", "GroupSpec", "IrregularType", "MarkedPoint", "ResidueData",
    "mstar_dim", "orbit_dim", "very_good_point",
    "Graph", "attach_legs", "fission_graph", "kpartite_graph", "kpartite_type", "weyl_reflect",
    "GraphRep", "moment_map", "quiver_dim", "random_rep",
    "RationalMatrix",
    "isospectral_flow", "lie_poisson_bracket", "monodromy", "schlesinger_flow",
    "spectral_invariants",
]
