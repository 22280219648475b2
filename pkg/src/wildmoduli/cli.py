"""``wildmoduli`` command-line entry point.

Every command writes its result as JSON (to ``--out`` or stdout) and can
emit a report (``--report PATH``) listing the inputs digest, the seed, all
tolerances used, and each numeric check with its value and threshold.  Exit
codes: 0 all checks pass, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
import datetime
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__, betti, graphs, io, irregular, quiver, reproduce, spectral
from .reproduce import Check

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    args: dict
    inputs: list = field(default_factory=list)
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    report: str | None = None


@dataclass
class Report:
    command: str
    inputs_digest: str
    seed: int
    tolerances: dict
    outputs: object
    checks: list
    wall_time: float
    version: str = __version__
    created: str = ""

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def as_dict(self):
        return {"command": self.command, "inputs_digest": self.inputs_digest, "seed": self.seed,
                "tolerances": self.tolerances, "outputs": self.outputs, "checks": self.checks,
                "passed": self.passed, "wall_time": self.wall_time, "version": self.version,
                "created": self.created}


# -- argument parsing helpers -------------------------------------------------

# flag errors use pointers into the argument namespace, e.g. "/partition"

def _ints(cfg, name):
    text = cfg.args[name]
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise io.InputError(f"expected comma-separated integers, got {text!r}", f"/{name}") from exc
    if not vals:
        raise io.InputError("list must be nonempty", f"/{name}")
    return vals


def _complexes(cfg, name):
    text = cfg.args[name]
    try:
        vals = [complex(x.replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise io.InputError(f"expected comma-separated numbers, got {text!r}", f"/{name}") from exc
    if not vals:
        raise io.InputError("list must be nonempty", f"/{name}")
    return vals


def _point(text):
    """``RE,IM`` or a single complex literal."""
    parts = [float(x) for x in text.split(",")] if "," in text else None
    if parts is not None:
        if len(parts) != 2:
            raise io.InputError(f"expected RE,IM, got {text!r}")
        return complex(parts[0], parts[1])
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise io.InputError(f"expected a complex number, got {text!r}") from exc


def _path(text):
    return [_point(p) for p in text.split(";") if p.strip()]


def _load(path, decoder):
    try:
        return decoder(io.load_json(path))
    except OSError as exc:
        raise io.InputError(f"cannot read {path}: {exc.strerror}") from exc


def _tol(cfg, name, default):
    val = cfg.args.get("tol")
    val = default if val is None else val
    cfg.tolerances[name] = val
    return val


def _err(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


def _cvec(v):
    return [io.encode_complex(x) for x in v]


# -- command handlers ---------------------------------------------------------
# each returns (outputs, checks)

def cmd_graph_fission(cfg):
    Q = _load(cfg.args["irregular_type"], io.decode_irregular_type)
    return io.encode_graph(graphs.fission_graph(Q)), []


def cmd_graph_kpartite(cfg):
    parts = _ints(cfg, "partition")
    return io.encode_graph(graphs.kpartite_graph(parts)), []


def cmd_graph_legs(cfg):
    g = _load(cfg.args["graph"], io.decode_graph)
    return io.encode_graph(graphs.attach_legs(g, _ints(cfg, "legs"))), []


def cmd_quiver_dim(cfg):
    g = _load(cfg.args["graph"], io.decode_graph)
    d = _ints(cfg, "dims")
    return {"dim": quiver.quiver_dim(g, d), "rep_space_dim": quiver.rep_space_dim(g, d)}, []


def cmd_quiver_moment_check(cfg):
    g = _load(cfg.args["graph"], io.decode_graph)
    d = _ints(cfg, "dims")
    tol_tr = _tol(cfg, "trace", 1e-10)
    tol_eq = 1e-9 if cfg.args.get("tol") is None else cfg.args["tol"]
    cfg.tolerances["equivariance"] = tol_eq
    rng = np.random.default_rng([cfg.seed, 1])
    tr = eq = 0.0
    for s in range(cfg.args["samples"]):
        r = quiver.random_rep(g, d, [cfg.seed, s])
        mu = quiver.moment_map(r)
        tr = max(tr, abs(sum(np.trace(m) for m in mu)))
        gs = [np.eye(k) + 0.3 * (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
              for k in d]
        moved = quiver.moment_map(r.act(gs))
        eq = max(eq, max((_err(x, gi @ m @ np.linalg.inv(gi)) for x, gi, m in zip(moved, gs, mu)),
                         default=0.0))
    return ({"samples": cfg.args["samples"], "trace_error": tr, "equivariance_error": eq},
            [Check("sum of traces", tr, tol_tr), Check("equivariance", eq, tol_eq)])


def _group(cfg, fallback=None):
    if cfg.args.get("group"):
        return io.parse_group(cfg.args["group"])
    if fallback is None:
        raise io.InputError("no group given; pass --group", "/group")
    return fallback


def cmd_orbit_dim(cfg):
    obj = io.load_json(cfg.args["point"])
    curve, _ = io.decode_curve({"points": [obj]})
    G = _group(cfg)
    B = curve.points[0].point()
    return {"orbit_dim": irregular.orbit_dim(B, G), "k": B.k, "n": B.n}, []


def cmd_orbit_mstar_dim(cfg):
    curve, G = _load(cfg.args["curve"], io.decode_curve)
    G = _group(cfg, G)
    dims = [irregular.orbit_dim(p.point(), G) for p in curve.points]
    return {"mstar_dim": irregular.mstar_dim(curve, G), "orbit_dims": dims}, []


def cmd_betti_dim(cfg):
    G = _group(cfg)
    genus = cfg.args["genus"]
    if cfg.args.get("fission"):
        return {"dim": betti.wild_cv_dim(genus, _ints(cfg, "fission"), G)}, []
    if cfg.args.get("class_dims") is None:
        raise io.InputError("pass --class-dims or --fission")
    return {"dim": betti.tame_cv_dim(genus, _ints(cfg, "class_dims"), G)}, []


def _fit_dict(fit):
    return {"coefficients": {k: io.encode_complex(v) for k, v in fit.coefficients.items()},
            "residual": fit.residual, "num_fit": fit.num_fit, "num_validate": fit.num_validate}


def cmd_betti_fkv(cfg):
    p = _complexes(cfg, "traces")
    if len(p) != 4:
        raise io.InputError(f"need four traces, got {len(p)}")
    tol = _tol(cfg, "fit", betti.FIT_TOL)
    N = cfg.args["samples"]
    n_fit = max(8, N // 3)
    fit = betti.fkv_surface(p, n_fit=n_fit, n_validate=max(N - n_fit, 1), seed=cfg.seed, tol=tol)
    out = _fit_dict(fit)
    out["provenance"] = {"traces": _cvec(p), "seeds": [[cfg.seed, i] for i in range(n_fit)],
                         "validation_seeds": [[cfg.seed, i] for i in range(n_fit, n_fit + max(N - n_fit, 1))],
                         "sampler": "sample_fkv_tuple"}
    return out, [Check("FKV validation residual", fit.residual, tol)]


def cmd_betti_fn(cfg):
    q0 = _point(cfg.args["q0"])
    tol = _tol(cfg, "fit", betti.FIT_TOL)
    cfg.tolerances["relation"] = betti.CONSTRAINT_TOL
    N = cfg.args["samples"]
    n_fit = max(5, N // 3)
    n_val = max(N - n_fit, 1)
    pts = [betti.sample_fission_fiber(3, q0, [cfg.seed, i]) for i in range(n_fit + n_val)]
    xyz = [betti.fn_invariants(pt) for pt in pts]
    fit = betti.fit_fn(xyz[:n_fit], q0, xyz[n_fit:], tol)
    rel = max(pt.relation_error() for pt in pts)
    out = _fit_dict(fit)
    out["relation_error"] = rel
    out["provenance"] = {"q0": io.encode_complex(q0), "r": 3,
                         "seeds": [[cfg.seed, i] for i in range(n_fit + n_val)],
                         "num_fit": n_fit, "sampler": "sample_fission_fiber"}
    return out, [Check("FN validation residual", fit.residual, tol),
                 Check("fiber relation", rel, betti.CONSTRAINT_TOL)]


def _matrix(cfg):
    return _load(cfg.args["matrix"], io.decode_rational)


def cmd_spectral_invariants(cfg):
    A = _matrix(cfg)
    inv = spectral.spectral_invariants(A)
    labels = [list(lab) for lab in spectral.invariant_labels(A)]
    return {"invariants": _cvec(inv), "labels": labels}, []


def cmd_spectral_bracket(cfg):
    A = _matrix(cfg)
    h = cfg.args["step"]
    cfg.tolerances["fd_step"] = h
    f = cfg.args["f"]
    if cfg.args.get("probe"):
        t, a, b = _ints(cfg, "probe")
        g = lambda M: M.parts[t][0][a, b]  # noqa: E731
        return {"bracket": io.encode_complex(spectral.lie_poisson_bracket(A, f, g, h)),
                "g": f"probe {t},{a},{b}"}, []
    if cfg.args.get("g") is None:
        B = spectral.bracket_matrix(A, h)
        tol = _tol(cfg, "commutativity", 1e-6)
        worst = float(np.max(np.abs(B), initial=0.0))
        return ({"max_bracket": worst, "count": int(B.shape[0])},
                [Check("max pairwise bracket", worst, tol)])
    return {"bracket": io.encode_complex(spectral.lie_poisson_bracket(A, f, cfg.args["g"], h))}, []


def cmd_spectral_flow(cfg):
    A = _matrix(cfg)
    tol = _tol(cfg, "drift", 1e-6)
    B = spectral.isospectral_flow(A, cfg.args["hamiltonian"], cfg.args["time"], cfg.args["steps"], tol)
    drift = _err(spectral.spectral_invariants(B), spectral.spectral_invariants(A))
    return {"matrix": io.encode_rational(B), "drift": drift}, [Check("invariant drift", drift, tol)]


def _mono_out(mono):
    return {"base": io.encode_complex(mono.base), "ordering": mono.ordering,
            "matrices": [io.encode_matrix(M) for M in mono.matrices]}


def cmd_spectral_monodromy(cfg):
    A = _matrix(cfg)
    tol = _tol(cfg, "ode", spectral.ODE_TOL)
    base = _point(cfg.args["base"]) if cfg.args.get("base") else None
    ordering = _ints(cfg, "ordering") if cfg.args.get("ordering") else None
    mono = spectral.monodromy(A, base, ordering, tol)
    out = _mono_out(mono)
    checks = []
    if not np.allclose(sum(A.residues), 0) or len(A.poly):
        out["note"] = "infinity is a pole; product relation not checked"
    else:
        cfg.tolerances["product"] = 1e-6
        checks.append(Check("product relation", mono.product_error(), 1e-6))
    try:
        mis = spectral.class_mismatch(A, mono)
        cfg.tolerances["class"] = 1e-5
        checks.append(Check("class membership", mis, 1e-5))
    except spectral.ResonanceError as exc:
        out["note_class"] = f"class check skipped: {exc}"
    return out, checks


def cmd_spectral_schlesinger(cfg):
    A = _matrix(cfg)
    tol = _tol(cfg, "ode", spectral.ODE_TOL)
    cfg.tolerances["trace_drift"] = 1e-5
    path = _path(cfg.args["path"])
    moving = cfg.args["moving"]
    B = spectral.schlesinger_flow(A, moving, path, tol)
    base = _point(cfg.args["base"]) if cfg.args.get("base") else spectral.default_base(
        list(A.positions) + path)
    before = spectral.trace_functions(spectral.monodromy(A, base, tol=tol))
    after = spectral.trace_functions(spectral.monodromy(B, base, tol=tol))
    drift = _err(after, before)
    return ({"matrix": io.encode_rational(B), "trace_functions": _cvec(after), "base": io.encode_complex(base)},
            [Check("monodromy trace drift", drift, 1e-5)])


def cmd_spectral_normalize(cfg):
    A = _matrix(cfg)
    return {"matrix": io.encode_rational(spectral.normalize_infinity(A, _point(cfg.args["center"])))}, []


def cmd_reproduce(cfg):
    suite = cfg.args["suite"]
    if suite not in (*reproduce.SUITES, "all"):
        raise io.InputError(f"unknown suite {suite!r}")
    checks = reproduce.run_suite(suite, seed=cfg.seed)
    for c in checks:
        if c.relation != "==":
            cfg.tolerances[c.name] = c.threshold
    return {"suite": suite, "count": len(checks)}, checks


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS so a flag given before the subcommand is not reset by the subparser
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float, help="override the command's tolerance")
    common.add_argument("--out", help="write the result JSON here instead of stdout")
    common.add_argument("--report", help="write a JSON report here")

    p = argparse.ArgumentParser(prog="wildmoduli", parents=[common], description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    top = p.add_subparsers(dest="area", required=True)

    def sub(parent, name, handler, **kw):
        s = parent.add_parser(name, parents=[common], **kw)
        s.set_defaults(handler=handler)
        return s

    g = top.add_parser("graph").add_subparsers(dest="cmd", required=True)
    s = sub(g, "fission", cmd_graph_fission)
    s.add_argument("--irregular-type", required=True, dest="irregular_type")
    s = sub(g, "kpartite", cmd_graph_kpartite)
    s.add_argument("--partition", required=True)
    s = sub(g, "legs", cmd_graph_legs)
    s.add_argument("--graph", required=True)
    s.add_argument("--legs", required=True)

    q = top.add_parser("quiver").add_subparsers(dest="cmd", required=True)
    s = sub(q, "dim", cmd_quiver_dim)
    s.add_argument("--graph", required=True)
    s.add_argument("--dims", required=True)
    s = sub(q, "moment-check", cmd_quiver_moment_check)
    s.add_argument("--graph", required=True)
    s.add_argument("--dims", required=True)
    s.add_argument("--samples", type=int, default=50)

    o = top.add_parser("orbit").add_subparsers(dest="cmd", required=True)
    s = sub(o, "dim", cmd_orbit_dim)
    s.add_argument("--point", required=True, help="marked point JSON")
    s.add_argument("--group", required=True, help="GLn or SLn")
    s = sub(o, "mstar-dim", cmd_orbit_mstar_dim)
    s.add_argument("--curve", required=True)
    s.add_argument("--group")

    b = top.add_parser("betti").add_subparsers(dest="cmd", required=True)
    s = sub(b, "fkv", cmd_betti_fkv)
    s.add_argument("--traces", required=True)
    s.add_argument("--samples", type=int, default=32)
    s = sub(b, "fn", cmd_betti_fn)
    s.add_argument("--q0", required=True)
    s.add_argument("--samples", type=int, default=30)
    s = sub(b, "dim", cmd_betti_dim)
    s.add_argument("--group", required=True)
    s.add_argument("--genus", type=int, default=0)
    s.add_argument("--class-dims", dest="class_dims")
    s.add_argument("--fission", help="Stokes pair counts r, one per irregular pole")

    sp = top.add_parser("spectral").add_subparsers(dest="cmd", required=True)
    s = sub(sp, "invariants", cmd_spectral_invariants)
    s.add_argument("--matrix", required=True)
    s = sub(sp, "bracket", cmd_spectral_bracket)
    s.add_argument("--matrix", required=True)
    s.add_argument("--f", type=int, default=0)
    s.add_argument("--g", type=int)
    s.add_argument("--probe", help="T,A,B: bracket with the entry (A,B) of residue T")
    s.add_argument("--step", type=float, default=spectral.DEFAULT_STEP)
    s = sub(sp, "flow", cmd_spectral_flow)
    s.add_argument("--matrix", required=True)
    s.add_argument("--hamiltonian", type=int, required=True)
    s.add_argument("--time", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=1000)
    s = sub(sp, "monodromy", cmd_spectral_monodromy)
    s.add_argument("--matrix", required=True)
    s.add_argument("--base")
    s.add_argument("--ordering")
    s = sub(sp, "schlesinger", cmd_spectral_schlesinger)
    s.add_argument("--matrix", required=True)
    s.add_argument("--moving", type=int, required=True)
    s.add_argument("--path", required=True, help="points RE,IM separated by ';'")
    s.add_argument("--base")
    s = sub(sp, "normalize", cmd_spectral_normalize)
    s.add_argument("--matrix", required=True)
    s.add_argument("--center", default="0,0")

    s = top.add_parser("reproduce", parents=[common])
    s.set_defaults(handler=cmd_reproduce, cmd=None)
    s.add_argument("suite")
    return p


def _digest(cfg):
    h = hashlib.sha256(json.dumps({"command": cfg.command, "args": cfg.args}, sort_keys=True,
                                  default=str).encode())
    for path in cfg.inputs:
        try:
            with open(path, "rb") as fh:
                h.update(fh.read())
        except OSError:
            pass
    return h.hexdigest()


def run(cfg: RunConfig, handler) -> Report:
    t0 = time.perf_counter()
    outputs, checks = handler(cfg)
    return Report(cfg.command, _digest(cfg), cfg.seed, dict(sorted(cfg.tolerances.items())),
                  outputs, [c.as_dict() for c in checks], time.perf_counter() - t0,
                  created=datetime.datetime.now(datetime.timezone.utc).isoformat())


_FILE_ARGS = ("irregular_type", "graph", "point", "curve", "matrix")
_GLOBAL = ("seed", "out", "report", "handler", "area", "cmd")


def config_from_args(ns) -> RunConfig:
    v = vars(ns)
    args = {k: x for k, x in v.items() if k not in _GLOBAL}
    args.setdefault("tol", None)
    command = " ".join(x for x in (ns.area, ns.cmd) if x)
    return RunConfig(command, args, [x for k, x in args.items() if k in _FILE_ARGS and x],
                     v.get("seed", 0), {}, v.get("out"), v.get("report"))


def _write(path, text):
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = config_from_args(ns)
    try:
        report = run(cfg, ns.handler)
    except io.InputError as exc:
        print(f"input error at {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (betti.FitError, betti.SamplingError, irregular.ConditioningError) as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (ValueError, KeyError, NotImplementedError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write(cfg.out, io.dumps(report.outputs))
    if cfg.report:
        _write(cfg.report, io.dumps(report.as_dict()))
    failed = [c for c in report.checks if not c["passed"]]
    for c in failed:
        print(f"check failed: {c['name']} = {c['value']} (threshold {c['relation']} {c['threshold']})",
              file=sys.stderr)
    return EXIT_CHECK if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
