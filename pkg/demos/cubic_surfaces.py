"""Cubic surfaces from monodromy: the tame four-pole case and Painleve II.

Run: python3 demos/cubic_surfaces.py
"""

from wildmoduli import betti

# Four local traces fix the cubic x y z + x^2 + y^2 + z^2 + a x + b y + c z = d.
fit = betti.fkv_surface((0.5, 1.2, -0.3, 0.7), seed=0)
print("FKV constants:", {k: complex(v) for k, v in fit.coefficients.items()})
print("validation residual:", fit.residual)

# r = 3 fission fibers give x y z + x + y + z = d with d fixed by the formal monodromy.
for q0 in (2.0, 1.5 + 0.7j):
    pts = [betti.sample_fission_fiber(3, q0, [1, i]) for i in range(15)]
    xyz = [betti.fn_invariants(p) for p in pts]
    fit = betti.fit_fn(xyz[:5], q0, xyz[5:])
    beta = betti.fn_scale(q0)
    print(f"q0 = {q0}: d = {complex(fit.coefficients['d']):.6f}, beta - 1/beta = {beta - 1 / beta:.6f},"
          f" residual {fit.residual:.1e}")
