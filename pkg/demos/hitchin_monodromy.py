"""Spectral invariants, isospectral flow, monodromy and a Schlesinger step.

Run: python3 demos/hitchin_monodromy.py
"""

import numpy as np

from wildmoduli import spectral

A = spectral.random_simple(2, 3, seed=0)
labels = spectral.invariant_labels(A)
print("invariant labels:", labels)

# The spectral invariants Poisson commute; a coordinate function does not.
B = spectral.bracket_matrix(A)
H = labels.index((2, "pole", 0, 1))
probe = spectral.lie_poisson_bracket(A, H, lambda M: M.parts[0][0][0, 1])
print(f"max bracket of invariants {np.abs(B).max():.1e}, control bracket {abs(probe):.1e}")

# The Gaudin flow moves the residues but keeps every invariant.
A1 = spectral.isospectral_flow(A, H, 1.0, 1000)
drift = np.abs(spectral.spectral_invariants(A1) - spectral.spectral_invariants(A)).max()
print(f"flow drift {drift:.1e}")

# Balanced residues: the loops multiply to the identity.
Ab = spectral.random_simple(2, 3, [0, 200], scale=0.3, balanced=True, positions=[0.0, 1.0 + 0.5j, -0.7 + 1.2j])
mono = spectral.monodromy(Ab)
print(f"monodromy product error {mono.product_error():.1e}, class mismatch {spectral.class_mismatch(Ab, mono):.1e}")

# Moving one pole by the Schlesinger flow leaves the trace functions unchanged.
Ap = spectral.random_simple(2, 3, [0, 300], scale=0.3, positions=[0.0, 0.3, 1.0])
base = -0.5 - 1.0j
before = spectral.trace_functions(spectral.monodromy(Ap, base=base))
Ap2 = spectral.schlesinger_flow(Ap, 1, [0.3, 0.35])
after = spectral.trace_functions(spectral.monodromy(Ap2, base=base))
print(f"trace functions before {np.round(before, 6)}\n                after  {np.round(after, 6)}")
