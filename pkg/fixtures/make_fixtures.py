"""Regenerate the JSON fixtures in this directory.

    python3 fixtures/make_fixtures.py

Snapshots record the command that derived them.
"""

from pathlib import Path

import numpy as np

from wildmoduli import betti, graphs, io, spectral
from wildmoduli.irregular import CurveSpec, GroupSpec
from wildmoduli.reproduce import four_simple_poles, pii_point

HERE = Path(__file__).parent


def write(name, obj):
    (HERE / name).write_text(io.dumps(obj) + "\n")


def main():
    write("a1tilde.json", io.encode_graph(graphs.affine_a1()))
    write("d4tilde.json", io.encode_graph(graphs.affine_d4()))
    write("pii_irregular_type.json", io.encode_irregular_type(pii_point().irregular_type))
    pii = CurveSpec((pii_point(),))
    write("pii_point.json", io.encode_curve(pii)["points"][0])
    write("pii_curve.json", io.encode_curve(pii, GroupSpec.SL(2)))
    write("four_poles_curve.json", io.encode_curve(four_simple_poles(), GroupSpec.SL(2)))
    write("garnier3.json", io.encode_rational(spectral.random_simple(2, 3, [0, 7], scale=0.4)))
    write("balanced3.json", io.encode_rational(spectral.random_simple(
        2, 3, [0, 200], scale=0.3, balanced=True, positions=[0.0, 1.0 + 0.5j, -0.7 + 1.2j])))
    write("pvi.json", io.encode_rational(spectral.random_simple(
        2, 3, [0, 300], scale=0.3, positions=[0.0, 0.3, 1.0])))

    fkv = []
    for p in [(0, 0, 0, 0), (0.5, 1.2, -0.3, 0.7)]:
        fit = betti.fkv_surface(p, seed=0)
        fkv.append({"traces": [io.encode_complex(x) for x in p],
                    "coefficients": {k: io.encode_complex(v) for k, v in fit.coefficients.items()},
                    "command": "wildmoduli betti fkv --traces " + ",".join(str(x) for x in p)
                               + " --samples 32 --seed 0"})
    fn = []
    for q0 in [2.0, 0.5, 1.5 + 0.7j]:
        fit = betti.fn_surface(q0, seed=1)
        fn.append({"q0": io.encode_complex(q0), "d": io.encode_complex(fit.coefficients["d"]),
                   "command": f"wildmoduli betti fn --q0 {q0.real:g},{complex(q0).imag:g} "
                              "--samples 30 --seed 1"})
    pt = betti.sample_fission_fiber(3, 2.0, 1)
    fiber = {"r": 3, "q0": io.encode_complex(2.0), "seed": 1,
             "s": [io.encode_complex(x) for x in pt.s],
             "xyz": [io.encode_complex(x) for x in betti.fn_invariants(pt)],
             "command": "betti.sample_fission_fiber(3, 2.0, seed=1)"}
    coords = betti.fkv_coords(betti.sample_fkv_tuple((0, 0, 0, 0), 1))
    fkv_pt = {"traces": [io.encode_complex(0)] * 4, "seed": 1,
              "xyz": [io.encode_complex(x) for x in coords],
              "command": "betti.fkv_coords(betti.sample_fkv_tuple((0, 0, 0, 0), seed=1))"}
    write("snapshots.json", {"fkv": fkv, "fn": fn, "fn_fiber_seed1": fiber, "fkv_coords_seed1": fkv_pt,
                             "note": "regression values derived by sampling and fitting; "
                                     "regenerate with fixtures/make_fixtures.py"})


if __name__ == "__main__":
    np.seterr(all="raise")
    main()
