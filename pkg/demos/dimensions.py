"""Orbit and moduli dimensions for a few standard configurations.

Run: python3 demos/dimensions.py
"""

import numpy as np

from wildmoduli import betti
from wildmoduli.irregular import (CurveSpec, GroupSpec, IrregularType, MarkedPoint, ResidueData,
                                  mstar_dim, orbit_dim, very_good_point)

SL2 = GroupSpec.SL(2)

# Painleve II: one pole of order 4 at infinity, Q = diag(1, -1)/z^3.
Q = IrregularType((([0, 0, 1], 1), ([0, 0, -1], 1)))
pii = MarkedPoint(None, 4, Q, ResidueData((((0.7, 1),), ((-0.7, 1),))))
B = pii.point()
print("PII principal part, leading coefficient:\n", np.round(B.coeffs[-1], 3))
print("orbit dimension:", orbit_dim(B, SL2))
print("M* dimension:", mstar_dim(CurveSpec((pii,)), SL2))

# Painleve VI shape: four simple poles, each residue diag(lam, -lam).
tame = CurveSpec(tuple(MarkedPoint(complex(a), 1, residue=ResidueData.tame([lam, -lam]))
                       for a, lam in zip(range(4), (0.3, 0.2, 0.45, 0.1))))
print("four simple poles, M* dimension:", mstar_dim(tame, SL2))

# The tame count for G2 with three regular classes and one subregular class.
G2 = GroupSpec.raw("G2", 14, 0, 2)
print("G2 tame dimension 3*6 + 12 - 2*14 =", betti.tame_cv_dim(0, [6, 6, 6, 12], G2))

# Higher rank: GL3 with k=2 and a regular leading term.
Q3 = IrregularType((([1.0], 1), ([-1.0], 1), ([2.0j], 1)))
B3 = very_good_point(Q3, ResidueData((((0.1, 1),), ((0.2, 1),), ((-0.3, 1),))))
print("GL3 k=2 orbit dimension:", orbit_dim(B3, GroupSpec.GL(3)))
