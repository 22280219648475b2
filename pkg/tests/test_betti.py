import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wildmoduli import betti
from wildmoduli.betti import (ConjClassSL2, FitError, RelationTuple, SamplingError, StokesFiberPoint,
                              fission_class_dim, fission_fiber_dim, fit_fkv, fit_fn, fkv_coords, fkv_surface,
                              fn_invariants, fn_scale, fn_surface, lower, sample_fission_fiber,
                              sample_fkv_tuple, tame_cv_dim, upper, wild_cv_dim)
from wildmoduli.irregular import GroupSpec, NonGenericError

SNAP = json.loads((Path(__file__).parent.parent / "fixtures" / "snapshots.json").read_text())
SL2, GL2 = GroupSpec.SL(2), GroupSpec.GL(2)
TRACES = [(0, 0, 0, 0), (0.5, 1.2, -0.3, 0.7), (1.0, -1.0, 0.3, 2.5), (0.1, 0.2, 0.3, 0.4),
          (1.5 + 0.5j, -0.2, 0.8j, 1.1)]


def c(v):
    return complex(v[0], v[1])


def fricke_constants(p):
    """Classical trace identity for x = tr M1M2, y = tr M2M3, z = tr M1M3."""
    p1, p2, p3, p4 = p
    return {"a": -(p1 * p2 + p3 * p4), "b": -(p2 * p3 + p1 * p4), "c": -(p1 * p3 + p2 * p4),
            "d": 4 - (p1**2 + p2**2 + p3**2 + p4**2) - p1 * p2 * p3 * p4}


def fn_oracle(q0):
    beta = fn_scale(q0)
    return beta - 1 / beta


def test_fricke_oracle_on_unconstrained_triples(rng):
    # the oracle itself, checked without the sampler or the fit
    for _ in range(20):
        Ms = [betti._random_sl2(rng) for _ in range(3)]
        M4 = np.linalg.inv(Ms[0] @ Ms[1] @ Ms[2])
        p = [np.trace(M) for M in (*Ms, M4)]
        x, y, z = np.trace(Ms[0] @ Ms[1]), np.trace(Ms[1] @ Ms[2]), np.trace(Ms[0] @ Ms[2])
        k = fricke_constants(p)
        val = x * y * z + x * x + y * y + z * z + k["a"] * x + k["b"] * y + k["c"] * z - k["d"]
        assert abs(val) < 1e-9 * max(1, abs(x * y * z))


def test_tame_cv_dim_examples():
    assert tame_cv_dim(0, [6, 6, 6, 12], GroupSpec.raw("G2", 14, 0, 2)) == 2
    assert tame_cv_dim(0, [2, 2, 2, 2], SL2) == 2
    assert tame_cv_dim(1, [], SL2) == 0
    with pytest.raises(NonGenericError):
        tame_cv_dim(0, [2, 2], SL2)


def test_wild_cv_dim_examples():
    assert fission_class_dim(3, SL2) == 8
    assert wild_cv_dim(0, [3], SL2) == 2
    assert fission_class_dim(1, GL2) == 4
    with pytest.raises(NonGenericError) as exc:
        wild_cv_dim(0, [1], GL2)
    assert exc.value.value == -2


def test_fiber_dimension_cross_check():
    assert fission_fiber_dim(3) == wild_cv_dim(0, [3], SL2) == 2


def test_conj_class():
    assert not ConjClassSL2(2).regular and not ConjClassSL2(-2).regular
    M = ConjClassSL2(0.3 + 1j).sample(np.random.default_rng(0))
    assert np.trace(M) == pytest.approx(0.3 + 1j)
    assert np.linalg.det(M) == pytest.approx(1)


def test_sample_fkv_examples():
    t = sample_fkv_tuple((0, 0, 0, 0), 0)
    assert np.allclose(t.product(), np.eye(2), atol=1e-8)
    with pytest.raises(ValueError):
        sample_fkv_tuple((2, 0, 0, 0), 0)


@pytest.mark.parametrize("p", TRACES)
def test_fkv_samples_satisfy_contract(p):
    for i in range(20):
        t = sample_fkv_tuple(p, [7, i])
        assert np.max(np.abs(t.traces() - np.array(p))) < 1e-9
        t.check(det_tol=1e-10, prod_tol=1e-8)


def test_fkv_coords_examples(rng):
    M1 = ConjClassSL2(0.4).sample(rng)
    M3 = ConjClassSL2(1.1).sample(rng)
    t = RelationTuple((M1, np.linalg.inv(M1), M3, np.linalg.inv(M3)))
    t.check()
    assert fkv_coords(t)[0] == pytest.approx(2)
    snap = SNAP["fkv_coords_seed1"]
    got = fkv_coords(sample_fkv_tuple((0, 0, 0, 0), 1))
    assert np.allclose(got, [c(v) for v in snap["xyz"]], atol=1e-9)


@given(st.integers(0, 2**31))
def test_fkv_coords_conjugation_invariant(seed):
    rng = np.random.default_rng(seed)
    t = sample_fkv_tuple((0.5, 1.2, -0.3, 0.7), seed)
    g = betti._random_sl2(rng)
    assert np.allclose(fkv_coords(t.conjugate(g)), fkv_coords(t), atol=1e-9)


@pytest.mark.parametrize("p", TRACES)
def test_fkv_fit_matches_oracle_and_is_seed_independent(p):
    fits = [fkv_surface(p, seed=s) for s in (0, 1, 2)]
    expected = fricke_constants([complex(x) for x in p])
    for fit in fits:
        assert fit.residual < 1e-7 and fit.num_validate >= 20
        for k in "abcd":
            assert abs(fit.coefficients[k] - expected[k]) < 1e-6
    for k in "abcd":
        assert abs(fits[0].coefficients[k] - fits[2].coefficients[k]) < 1e-6


def test_fkv_snapshots():
    for entry in SNAP["fkv"]:
        p = [c(v) for v in entry["traces"]]
        fit = fkv_surface(p, seed=0)
        for k, v in entry["coefficients"].items():
            assert abs(fit.coefficients[k] - c(v)) < 1e-9
    zero = SNAP["fkv"][0]["coefficients"]
    assert np.allclose([c(zero[k]) for k in "abcd"], [0, 0, 0, 4], atol=1e-9)


def test_fit_fkv_degenerate():
    pt = fkv_coords(sample_fkv_tuple((0, 0, 0, 0), 3))
    with pytest.raises(FitError):
        fit_fkv([pt] * 12)
    with pytest.raises(FitError):
        fit_fkv([pt] * 3)


def test_fit_fkv_rejects_wrong_surface():
    pts = [fkv_coords(sample_fkv_tuple((0, 0, 0, 0), [1, i])) for i in range(10)]
    other = [fkv_coords(sample_fkv_tuple((0.5, 0.5, 0.5, 0.5), [2, i])) for i in range(10)]
    with pytest.raises(FitError):
        fit_fkv(pts, other)


def test_fission_fiber_examples():
    pt = sample_fission_fiber(1, 1.0, 0)
    assert np.all(pt.s == 0)
    with pytest.raises(SamplingError):
        sample_fission_fiber(1, 2.0, 0)
    with pytest.raises(ValueError):
        sample_fission_fiber(3, 0, 0)
    pt = sample_fission_fiber(3, 2.0, 1)
    assert pt.relation_error() < 1e-9
    snap = SNAP["fn_fiber_seed1"]
    assert np.allclose(pt.s, [c(v) for v in snap["s"]], atol=1e-9)
    assert np.allclose(fn_invariants(pt), [c(v) for v in snap["xyz"]], atol=1e-9)


@given(st.integers(0, 2**31), st.integers(2, 5),
       st.complex_numbers(min_magnitude=0.2, max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_fiber_relation_and_torus_action(seed, r, q0):
    pt = sample_fission_fiber(r, q0, seed)
    assert pt.relation_error() < 1e-9
    t = complex(np.random.default_rng(seed).uniform(0.5, 2)) * np.exp(0.3j)
    moved = pt.torus_act(t)
    assert moved.relation_error() < 1e-9 * max(1, np.abs(moved.s).max() ** 2)
    if r == 3:
        assert np.allclose(fn_invariants(moved), fn_invariants(pt), atol=1e-10 * max(1, np.abs(pt.s).max() ** 2))


def independent_fiber_point(rng):
    """Draw s1..s4 and solve L(s6) U(s5) W = diag(q, 1/q) for s5, s6 and q."""
    s = list(rng.standard_normal(4) + 1j * rng.standard_normal(4))
    W = np.eye(2, dtype=complex)
    for i, v in enumerate(s):
        W = (upper(v) if i % 2 == 0 else lower(v)) @ W
    s5 = -W[0, 1] / W[1, 1]
    s6 = -W[1, 0] * W[1, 1]
    q0 = 1 / W[1, 1]
    return StokesFiberPoint(np.array(s + [s5, s6]), q0)


def test_fn_relation_on_independently_built_points(rng):
    for _ in range(50):
        pt = independent_fiber_point(rng)
        assert pt.relation_error() < 1e-9
        x, y, z = fn_invariants(pt)
        val = x * y * z + x + y + z
        assert abs(val - fn_oracle(pt.q0)) < 1e-8 * max(1, abs(x * y * z))


@pytest.mark.parametrize("q0", [2.0, 0.5, 1.5 + 0.7j, -3.0 + 1.0j, 0.3 - 2j])
def test_fn_fit_seed_independent(q0):
    ds = []
    for seed in range(1, 11):
        fit = fn_surface(q0, seed=seed)
        assert fit.residual < 1e-7
        ds.append(fit.coefficients["d"])
    assert np.max(np.abs(np.array(ds) - ds[0])) < 1e-6
    assert abs(ds[0] - fn_oracle(q0)) < 1e-9


def test_fn_snapshots():
    for entry in SNAP["fn"]:
        fit = fn_surface(c(entry["q0"]), seed=1)
        assert abs(fit.coefficients["d"] - c(entry["d"])) < 1e-9


def test_fn_inverse_q0():
    # d depends on the choice of sqrt(-q0); only d**2 = -(q0 + 2 + 1/q0) is branch free.
    for q0 in [1.5 + 0.7j, -3.0 + 1.0j, 0.3 - 2j]:
        d, d_inv = (fn_surface(q, seed=1).coefficients["d"] for q in (q0, 1 / q0))
        assert abs(d_inv + d) < 1e-9
        assert abs(d * d - (-(q0 + 2 + 1 / q0))) < 1e-9
    d, d_inv = (fn_surface(q, seed=1).coefficients["d"] for q in (2.0, 0.5))
    assert abs(d - d_inv) < 1e-9


def test_fn_retry_path_points_lie_on_surface():
    q0 = 1.5 + 0.7j
    fit = fn_surface(q0, seed=0)
    # a tight entry bound forces the sampler through its retry branch
    pts = [sample_fission_fiber(3, q0, [4, i], retries=500, bound=4.0) for i in range(5)]
    for pt in pts:
        x, y, z = fn_invariants(pt)
        assert abs(x * y * z + x + y + z - fit.coefficients["d"]) < 1e-7


def test_fit_fn_degenerate():
    pt = fn_invariants(sample_fission_fiber(3, 2.0, 0))
    with pytest.raises(FitError):
        fit_fn([pt] * 10, 2.0)
    with pytest.raises(FitError):
        fit_fn([pt] * 3, 2.0)
    with pytest.raises(NotImplementedError):
        fn_invariants(sample_fission_fiber(2, 2.0, 0))


def test_fn_fit_rejects_mixed_q0():
    a = [fn_invariants(sample_fission_fiber(3, 2.0, [1, i])) for i in range(6)]
    b = [fn_invariants(sample_fission_fiber(3, -1.0 + 1j, [1, i])) for i in range(6)]
    with pytest.raises(FitError):
        fit_fn(a, 2.0, b)
