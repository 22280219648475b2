"""Multiplicative side: character varieties, Stokes fibres and their cubic surfaces.

Two explicit surfaces are produced by sampling and fitting.

* Four-punctured sphere, ``SL_2``: tuples ``M_1 M_2 M_3 M_4 = 1`` with fixed
  traces, in the coordinates ``x = tr(M_1 M_2)``, ``y = tr(M_2 M_3)``,
  ``z = tr(M_1 M_3)``, satisfy ``xyz + x^2 + y^2 + z^2 + ax + by + cz = d``.
* Fission fibre with ``r = 3``: unipotent factors ``S_odd = [[1, s], [0, 1]]``,
  ``S_even = [[1, 0], [s, 1]]`` with ``S_6 ... S_1 = diag(q0, 1/q0)``.  With
  ``beta = sqrt(-q0)`` (principal branch) the torus invariants

      x = beta (1 + s1 s2),  y = beta (1 + s3 s4),  z = beta (1 + s5 s6)

  satisfy ``xyz + x + y + z = d``.  The coordinates were selected by
  computing the cubic relation among ``s1 s2, s3 s4, s5 s6`` on sampled
  fibres and normalising it; the scale ``beta`` is forced by requiring unit
  cubic and linear coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from .irregular import GroupSpec, NonGenericError

CONSTRAINT_TOL = 1e-9
FIT_TOL = 1e-7
MAX_RETRIES = 50


class SamplingError(RuntimeError):
    """A sampler kept hitting degenerate draws."""


class FitError(ValueError):
    """A cubic fit is underdetermined or does not reproduce the samples."""


def tame_cv_dim(genus, class_dims, G: GroupSpec) -> int:
    """``2g dim G + sum dim C_i - 2 (dim G - dim Z(G))``."""
    if any(c < 0 for c in class_dims):
        raise ValueError("conjugacy class dimensions must be nonnegative")
    dim = 2 * genus * G.dim + sum(class_dims) - 2 * (G.dim - G.center_dim)
    if dim < 0:
        raise NonGenericError(f"dimension count {dim} < 0: empty or non-generic", dim)
    return dim


def fission_class_dim(r, G: GroupSpec) -> int:
    """``dim A - 2 dim H`` for the fission space ``G x (U+ x U-)^r x H``."""
    return G.dim + r * (G.dim - G.torus_dim) + G.torus_dim - 2 * G.torus_dim


def wild_cv_dim(genus, fission, G: GroupSpec) -> int:
    """Dimension of a wild character variety with one fission pole per entry
    of ``fission`` (the number ``r`` of Stokes pairs, regular leading term)."""
    if any(r < 1 for r in fission):
        raise ValueError("each pole needs r >= 1")
    dim = 2 * genus * G.dim + sum(fission_class_dim(r, G) for r in fission) \
        - 2 * (G.dim - G.center_dim)
    if dim < 0:
        raise NonGenericError(f"dimension count {dim} < 0: empty or non-generic", dim)
    return dim


@dataclass(frozen=True)
class ConjClassSL2:
    """Semisimple class in ``SL_2`` given by its trace."""

    trace: complex

    @property
    def regular(self) -> bool:
        return self.trace not in (2, -2)

    def eigenvalue(self) -> complex:
        p = complex(self.trace)
        return (p + np.sqrt(p * p - 4)) / 2

    def sample(self, rng) -> np.ndarray:
        lam = self.eigenvalue()
        g = _random_sl2(rng)
        return g @ np.diag([lam, 1 / lam]) @ np.linalg.inv(g)


def _random_sl2(rng):
    while True:
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        det = np.linalg.det(g)
        if abs(det) > 0.1:
            return g / np.sqrt(det)


@dataclass(frozen=True, eq=False)
class RelationTuple:
    matrices: tuple

    def __post_init__(self):
        mats = tuple(np.array(m, dtype=complex).reshape(2, 2) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)

    def product(self) -> np.ndarray:
        P = np.eye(2, dtype=complex)
        for M in self.matrices:
            P = P @ M
        return P

    def traces(self) -> np.ndarray:
        return np.array([np.trace(M) for M in self.matrices])

    def check(self, det_tol=1e-10, prod_tol=1e-8):
        dets = np.array([np.linalg.det(M) for M in self.matrices])
        if np.max(np.abs(dets - 1)) > det_tol:
            raise ValueError(f"determinants deviate from 1 by {np.max(np.abs(dets - 1)):.3g}")
        err = np.max(np.abs(self.product() - np.eye(2)))
        if err > prod_tol:
            raise ValueError(f"product deviates from identity by {err:.3g}")

    def conjugate(self, g) -> "RelationTuple":
        gi = np.linalg.inv(g)
        return RelationTuple(tuple(g @ M @ gi for M in self.matrices))


def sample_fkv_tuple(p, seed, retries=MAX_RETRIES, bound=1e3) -> RelationTuple:
    """Random ``(M_1, ..., M_4)`` in ``SL_2`` with ``tr M_i = p_i`` and product 1.

    ``M_1, M_2`` are drawn in their classes, ``P = (M_1 M_2)^-1``, and
    ``M_3 = [[a, b], [c, p_3 - a]]`` is found from ``det M_3 = 1`` and
    ``tr(M_3^-1 P) = p_4`` after drawing ``a``; this leaves a quadratic in
    ``c``.  ``M_4 = M_3^-1 P``.
    """
    p = [complex(x) for x in p]
    if len(p) != 4:
        raise ValueError("need four traces")
    classes = [ConjClassSL2(x) for x in p]
    for i, C in enumerate(classes):
        if not C.regular:
            raise ValueError(f"trace p_{i + 1} = {p[i]} is not regular semisimple")
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        M1, M2 = classes[0].sample(rng), classes[1].sample(rng)
        P = np.linalg.inv(M1 @ M2)
        a = complex(rng.standard_normal() + 1j * rng.standard_normal())
        d = p[2] - a
        R = p[3] - d * P[0, 0] - a * P[1, 1]   # = -b P21 - c P12
        S = a * d - 1                           # = b c
        if abs(P[1, 0]) < 1e-6 or abs(P[0, 1]) < 1e-6:
            continue
        # b = -(R + c P12)/P21, b c = S  =>  P12 c^2 + R c + S P21 = 0
        roots = np.roots([P[0, 1], R, S * P[1, 0]])
        if roots.size != 2:
            continue
        c = roots[rng.integers(2)]
        b = -(R + c * P[0, 1]) / P[1, 0]
        M3 = np.array([[a, b], [c, d]])
        M4 = np.linalg.solve(M3, P)
        t = RelationTuple((M1, M2, M3, M4))
        if max(np.max(np.abs(M)) for M in t.matrices) > bound:
            continue
        if np.max(np.abs(t.traces() - p)) > CONSTRAINT_TOL:
            continue
        try:
            t.check()
        except ValueError:
            continue
        return t
    raise SamplingError(f"no valid tuple for traces {p} after {retries} draws (seed {seed})")


def fkv_coords(t: RelationTuple):
    M1, M2, M3, _ = t.matrices
    return (complex(np.trace(M1 @ M2)), complex(np.trace(M2 @ M3)), complex(np.trace(M1 @ M3)))


@dataclass
class CubicFit:
    coefficients: dict
    residual: float
    num_fit: int
    num_validate: int = 0
    tolerance: float = FIT_TOL
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.residual < self.tolerance


def fkv_polynomial(xyz, a, b, c, d):
    x, y, z = np.asarray(xyz, dtype=complex).T
    return x * y * z + x**2 + y**2 + z**2 + a * x + b * y + c * z - d


def _distinct_rows(samples, tol=1e-9):
    s = np.asarray(samples, dtype=complex)
    return np.max(np.abs(s - s[0]), initial=0.0) > tol


def fit_fkv(samples, validation=None, tol=FIT_TOL) -> CubicFit:
    """Least-squares ``(a, b, c, d)`` for ``xyz + x^2 + y^2 + z^2 + ax + by + cz = d``.

    The residual is the largest ``|F|`` over ``validation`` (or over the
    fitting samples when none are given).
    """
    s = np.asarray(samples, dtype=complex).reshape(-1, 3)
    if len(s) < 8:
        raise FitError(f"need at least 8 samples, got {len(s)}")
    x, y, z = s.T
    A = np.column_stack([x, y, z, -np.ones_like(x)])
    rhs = -(x * y * z + x**2 + y**2 + z**2)
    sv = np.linalg.svd(A, compute_uv=False)
    if not _distinct_rows(s) or sv[-1] < 1e-9 * sv[0]:
        raise FitError("samples do not determine the four constants")
    coef = np.linalg.lstsq(A, rhs, rcond=None)[0]
    check = s if validation is None else np.asarray(validation, dtype=complex).reshape(-1, 3)
    res = float(np.max(np.abs(fkv_polynomial(check, *coef))))
    fit = CubicFit(dict(zip("abcd", (complex(v) for v in coef))), res, len(s),
                   0 if validation is None else len(check), tol)
    if not fit.ok:
        raise FitError(f"FKV residual {res:.3g} exceeds {tol:g}")
    return fit


def fkv_surface(p, n_fit=12, n_validate=20, seed=0, tol=FIT_TOL) -> CubicFit:
    """Sample, fit and validate the FKV cubic for trace vector ``p``."""
    pts = [fkv_coords(sample_fkv_tuple(p, [seed, i])) for i in range(n_fit + n_validate)]
    fit = fit_fkv(pts[:n_fit], pts[n_fit:], tol)
    fit.extra.update(traces=[complex(x) for x in p], seed=seed)
    return fit


def upper(s):
    return np.array([[1, s], [0, 1]], dtype=complex)


def lower(s):
    return np.array([[1, 0], [s, 1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class StokesFiberPoint:
    """Entries ``s_1..s_2r`` with ``S_2r ... S_1 = diag(q0, 1/q0)``."""

    s: np.ndarray
    q0: complex

    def __post_init__(self):
        s = np.array(self.s, dtype=complex).ravel()
        if s.size % 2 or s.size == 0:
            raise ValueError("need an even, positive number of Stokes entries")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "q0", complex(self.q0))

    @property
    def r(self) -> int:
        return self.s.size // 2

    def factors(self):
        """``S_1, ..., S_2r`` (odd upper, even lower triangular)."""
        return [upper(v) if i % 2 == 0 else lower(v) for i, v in enumerate(self.s)]

    def product(self) -> np.ndarray:
        P = np.eye(2, dtype=complex)
        for S in self.factors():
            P = S @ P
        return P

    def relation_error(self) -> float:
        return float(np.max(np.abs(self.product() - np.diag([self.q0, 1 / self.q0]))))

    def torus_act(self, t) -> "StokesFiberPoint":
        """Conjugate by ``diag(t, 1/t)``: ``s_odd -> t^2 s_odd``, ``s_even -> t^-2 s_even``."""
        w = np.where(np.arange(self.s.size) % 2 == 0, t**2, t**-2)
        return StokesFiberPoint(self.s * w, self.q0)


def sample_fission_fiber(r, q0, seed, retries=MAX_RETRIES, bound=1e3) -> StokesFiberPoint:
    """Random point of the fibre ``S_2r ... S_1 = diag(q0, 1/q0)``.

    ``s_1 .. s_{2r-3}`` are drawn; writing ``T = diag(q0, 1/q0) W^-1`` for
    the product ``W`` of the drawn factors, ``L(u) U(v) L(w) = T`` gives
    ``v = T_12``, ``w = (T_11 - 1)/v``, ``u = (T_22 - 1)/v``.
    """
    q0 = complex(q0)
    if q0 == 0:
        raise ValueError("q0 must be nonzero")
    if r < 1:
        raise ValueError("r must be at least 1")
    D = np.diag([q0, 1 / q0])
    if r == 1:
        # L(u) U(v) = [[1, v], [u, 1 + uv]] is diagonal only for u = v = 0.
        if abs(q0 - 1) > CONSTRAINT_TOL:
            raise SamplingError(f"the r=1 fibre over q0={q0} is empty")
        return StokesFiberPoint(np.zeros(2), q0)
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        head = rng.standard_normal(2 * r - 3) + 1j * rng.standard_normal(2 * r - 3)
        W = np.eye(2, dtype=complex)
        for i, v in enumerate(head):
            W = (upper(v) if i % 2 == 0 else lower(v)) @ W
        T = D @ np.linalg.inv(W)
        v = T[0, 1]
        if abs(v) < 1e-3:
            continue
        w = (T[0, 0] - 1) / v
        u = (T[1, 1] - 1) / v
        pt = StokesFiberPoint(np.concatenate([head, [w, v, u]]), q0)
        if np.max(np.abs(pt.s)) > bound or pt.relation_error() > CONSTRAINT_TOL:
            continue
        return pt
    raise SamplingError(f"no fibre point for r={r}, q0={q0} after {retries} draws (seed {seed})")


def fission_fiber_dim(r) -> int:
    """Free entries minus relation equations minus the torus direction."""
    return 2 * r - 3 - 1


def fn_scale(q0) -> complex:
    """``sqrt(-q0)``, principal branch; on the cut (``q0 > 0``) the root with positive imaginary part."""
    # adding 0j clears the signed zero that -q0 carries for real q0
    return complex(np.sqrt(-complex(q0) + 0j))


def fn_invariants(pt: StokesFiberPoint):
    """Torus-invariant coordinates ``beta (1 + s_{2i-1} s_{2i})``, ``beta = sqrt(-q0)``."""
    if pt.r != 3:
        raise NotImplementedError(f"coordinates are only defined for r=3, got r={pt.r}")
    beta = fn_scale(pt.q0)
    s = pt.s
    return tuple(complex(beta * (1 + s[2 * i] * s[2 * i + 1])) for i in range(3))


def fn_polynomial(xyz):
    x, y, z = np.asarray(xyz, dtype=complex).T
    return x * y * z + x + y + z


def fit_fn(samples, q0, validation=None, tol=FIT_TOL) -> CubicFit:
    """Constant ``d`` in ``xyz + x + y + z = d`` from samples over one ``q0``."""
    s = np.asarray(samples, dtype=complex).reshape(-1, 3)
    if len(s) < 5:
        raise FitError(f"need at least 5 samples, got {len(s)}")
    if not _distinct_rows(s):
        raise FitError("samples coincide; the surface is not sampled")
    vals = fn_polynomial(s)
    d = complex(np.mean(vals))
    check = vals if validation is None else fn_polynomial(
        np.asarray(validation, dtype=complex).reshape(-1, 3))
    res = float(np.max(np.abs(check - d)))
    fit = CubicFit({"d": d}, res, len(s), 0 if validation is None else len(check), tol,
                   {"q0": complex(q0)})
    if not fit.ok:
        raise FitError(f"FN residual {res:.3g} exceeds {tol:g}")
    return fit


def fn_surface(q0, n_fit=10, n_validate=20, seed=0, tol=FIT_TOL) -> CubicFit:
    pts = [fn_invariants(sample_fission_fiber(3, q0, [seed, i]))
           for i in range(n_fit + n_validate)]
    fit = fit_fn(pts[:n_fit], q0, pts[n_fit:], tol)
    fit.extra["seed"] = seed
    return fit
