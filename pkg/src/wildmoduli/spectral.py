"""Spectral invariants, Lie-Poisson brackets, isospectral flows and monodromy.

The phase space is a product of duals of jet algebras, one per pole of a
:class:`~wildmoduli.rational.RationalMatrix`; the polynomial part is a fixed
parameter.  Spectral invariants are the partial-fraction coefficients of
``tr(A(z)**p)/p`` for ``p = 1..n``, ordered by ``p``, then pole, then pole
order, then polynomial degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import warnings

import numpy as np
from scipy.integrate import solve_ivp

from .jetcore import Jet, PrincipalPart, coadjoint_action, residue_pairing
from .rational import RationalMatrix, identity_like, pole_power

DEFAULT_STEP = 1e-5
ODE_TOL = 1e-10


class GeometryError(ValueError):
    """An integration path passes too close to a pole."""


class ResonanceError(ValueError):
    """Residue eigenvalues differ by a nonzero integer."""


def invariant_labels(A: RationalMatrix):
    """``(p, "pole", t, i)`` and ``(p, "poly", m)`` in invariant order."""
    labels = []
    L = len(A.poly)
    for p in range(1, A.n + 1):
        for t, k in enumerate(A.orders):
            labels.extend((p, "pole", t, i) for i in range(1, p * k + 1))
        deg = p * (L - 1) + 1 if L else 0
        labels.extend((p, "poly", m) for m in range(deg))
    return labels


def _coefficient(R: RationalMatrix, label):
    if label[1] == "pole":
        _, _, t, i = label
        part = R.parts[t]
        return part[i - 1] if i <= len(part) else np.zeros_like(part[0])
    m = label[2]
    return R.poly[m] if m < len(R.poly) else np.zeros((R.n, R.n), dtype=complex)


def spectral_invariants(A: RationalMatrix) -> np.ndarray:
    """Coefficients of ``tr(A(z)**p)/p``, ``p = 1..n``, by exact partial fractions."""
    labels = invariant_labels(A)
    out = np.zeros(len(labels), dtype=complex)
    power = identity_like(A)
    traces = {}
    for p in range(1, A.n + 1):
        power = power @ A
        traces[p] = power.trace()
    for idx, lab in enumerate(labels):
        out[idx] = _coefficient(traces[lab[0]], lab)[0, 0] / lab[0]
    return out


def random_simple(n, m, seed, scale=0.4, traceless=True, balanced=False, positions=None):
    """``sum_t A_t/(z - a_t)`` with complex Gaussian residues of size ``scale``.

    ``balanced`` makes the residues sum to zero, so infinity is not a pole.
    Positions default to distinct random points in the unit square.
    """
    rng = np.random.default_rng(seed)
    R = scale * (rng.standard_normal((m, n, n)) + 1j * rng.standard_normal((m, n, n)))
    if traceless:
        R -= np.trace(R, axis1=1, axis2=2)[:, None, None] * np.eye(n) / n
    if balanced:
        R[-1] = -R[:-1].sum(axis=0)
    if positions is None:
        positions = rng.uniform(-1, 1, m) + 1j * rng.uniform(-1, 1, m)
    return RationalMatrix.simple(list(positions), list(R))


def perturb(A: RationalMatrix, t, i, a, b, eps) -> RationalMatrix:
    parts = [p.copy() for p in A.parts]
    parts[t][i, a, b] += eps
    return A.with_parts(parts)


def fd_gradients(A: RationalMatrix, func=spectral_invariants, h=DEFAULT_STEP):
    """Central-difference gradients of ``func`` as jets, one stack per pole.

    Returns a list over poles of arrays ``(N, k_t, n, n)`` where entry
    ``[f, i, b, a]`` is ``d func_f / d B_{t, i+1}[a, b]``, so that
    ``d func_f = sum_t <X_t, dB_t>`` under the residue pairing.
    """
    base = np.atleast_1d(func(A))
    N = base.size
    grads = []
    for t, k in enumerate(A.orders):
        G = np.zeros((N, k, A.n, A.n), dtype=complex)
        for i in range(k):
            for a in range(A.n):
                for b in range(A.n):
                    fp = np.atleast_1d(func(perturb(A, t, i, a, b, h)))
                    fm = np.atleast_1d(func(perturb(A, t, i, a, b, -h)))
                    G[:, i, b, a] = (fp - fm) / (2 * h)
        grads.append(G)
    return grads


def invariant_gradients(A: RationalMatrix, only=None):
    """Exact gradients of the spectral invariants, laid out as :func:`fd_gradients`.

    ``d tr(A^p)/p = tr(A^{p-1} dA)``, so the gradient with respect to
    ``B_{s,j}`` is the corresponding coefficient of ``A^{p-1} (z - a_s)^-j``.
    With ``only`` set, just that row is filled in.
    """
    labels = invariant_labels(A)
    grads = [np.zeros((len(labels), k, A.n, A.n), dtype=complex) for k in A.orders]
    power = identity_like(A)
    top = A.n if only is None else labels[only][0]
    for p in range(1, top + 1):
        rows = [r for r, lab in enumerate(labels)
                if lab[0] == p and (only is None or r == only)]
        if not rows:
            power = power @ A
            continue
        for s, k in enumerate(A.orders):
            for j in range(1, k + 1):
                R = power @ pole_power(A, s, j)
                for r in rows:
                    grads[s][r, j - 1] = _coefficient(R, labels[r])
        power = power @ A
    return grads


def principal_parts(A: RationalMatrix):
    return [PrincipalPart(p) for p in A.parts]


def _pair_bracket(A, Xf, Xg):
    total = 0j
    for B, xf, xg in zip(principal_parts(A), Xf, Xg):
        total += residue_pairing(Jet(xf).bracket(Jet(xg)), B)
    return total


def _resolve(A, f, h, grads):
    if callable(f):
        return [G[0] for G in fd_gradients(A, lambda M: np.atleast_1d(f(M)), h)]
    return [G[f] for G in grads]


def lie_poisson_bracket(A: RationalMatrix, f, g, h=DEFAULT_STEP) -> complex:
    """``{f, g}(A) = sum_t <[grad_t f, grad_t g], B_t>``.

    ``f`` and ``g`` are invariant indices or callables ``A -> complex``;
    gradients come from central differences with step ``h``.
    """
    grads = None
    if not (callable(f) and callable(g)):
        grads = fd_gradients(A, spectral_invariants, h)
    return _pair_bracket(A, _resolve(A, f, h, grads), _resolve(A, g, h, grads))


def bracket_matrix(A: RationalMatrix, h=DEFAULT_STEP, grads=None) -> np.ndarray:
    """All pairwise brackets of spectral invariants."""
    if grads is None:
        grads = fd_gradients(A, spectral_invariants, h)
    N = grads[0].shape[0]
    out = np.zeros((N, N), dtype=complex)
    for a in range(N):
        for b in range(a + 1, N):
            out[a, b] = _pair_bracket(A, [G[a] for G in grads], [G[b] for G in grads])
            out[b, a] = -out[a, b]
    return out


def hamiltonian_field(A: RationalMatrix, H, grads=None):
    """Velocities ``dB_t/dt = coadjoint_action(grad_t H, B_t)`` for ``f' = {f, H}``."""
    if grads is None:
        grads = invariant_gradients(A, only=H)
    return [coadjoint_action(Jet(G[H]), B).coeffs for G, B in zip(grads, principal_parts(A))]


def isospectral_flow(A: RationalMatrix, hamiltonian, t, steps=1000, tol=1e-6) -> RationalMatrix:
    """Flow of the spectral invariant ``hamiltonian`` for time ``t`` (classical RK4).

    Warns when the invariants drift by more than ``tol``.
    """
    if t == 0:
        return A
    dt = t / steps

    def shift(M, vel, c):
        return M.with_parts([p + c * v for p, v in zip(M.parts, vel)])

    inv0 = spectral_invariants(A)
    M = A
    for _ in range(steps):
        k1 = hamiltonian_field(M, hamiltonian)
        k2 = hamiltonian_field(shift(M, k1, dt / 2), hamiltonian)
        k3 = hamiltonian_field(shift(M, k2, dt / 2), hamiltonian)
        k4 = hamiltonian_field(shift(M, k3, dt), hamiltonian)
        M = M.with_parts([p + dt / 6 * (a + 2 * b + 2 * c + d)
                          for p, a, b, c, d in zip(M.parts, k1, k2, k3, k4)])
    drift = float(np.max(np.abs(spectral_invariants(M) - inv0), initial=0.0))
    if drift > tol:
        warnings.warn(f"invariant drift {drift:.3g} exceeds {tol:g}; increase steps",
                      RuntimeWarning, stacklevel=2)
    return M


def _segment_distance(p0, p1, q):
    d = p1 - p0
    if d == 0:
        return abs(q - p0)
    s = np.clip(((q - p0) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return abs(p0 + s * d - q)


def transport(A: RationalMatrix, vertices, tol=ODE_TOL, Y0=None) -> np.ndarray:
    """Solution of ``dY/dz = A(z) Y`` along a polygon, starting from ``Y0`` (identity)."""
    n = A.n
    Y = np.eye(n, dtype=complex) if Y0 is None else np.array(Y0, dtype=complex)
    for z0, z1 in zip(vertices[:-1], vertices[1:]):
        dz = z1 - z0
        if dz == 0:
            continue

        def rhs(s, y, z0=z0, dz=dz):
            return (A(z0 + s * dz) @ y.reshape(n, n) * dz).ravel()

        sol = solve_ivp(rhs, (0.0, 1.0), Y.ravel(), method="DOP853", rtol=tol, atol=tol)
        if not sol.success:
            raise RuntimeError(f"integration failed on segment {z0} -> {z1}: {sol.message}")
        Y = sol.y[:, -1].reshape(n, n)
    return Y


@dataclass
class MonodromyTuple:
    base: complex
    loops: list
    matrices: list
    ordering: list
    tolerance: float = ODE_TOL
    infinity_residue: np.ndarray | None = field(default=None, repr=False)

    def product(self) -> np.ndarray:
        """Composite transport along all loops in ``ordering`` (first loop acts first)."""
        P = np.eye(self.matrices[0].shape[0], dtype=complex)
        for t in self.ordering:
            P = self.matrices[t] @ P
        return P

    def product_error(self) -> float:
        return float(np.max(np.abs(self.product() - np.eye(self.product().shape[0]))))


def default_base(positions):
    a = np.asarray(positions, dtype=complex)
    gap = min_gap(a)
    spread = float(np.max(np.abs(a - a.mean()))) if a.size else 0.0
    return complex(a.real.mean(), a.imag.min() - 2 * (spread + gap))


def min_gap(a):
    a = np.asarray(a, dtype=complex)
    if a.size < 2:
        return 1.0
    return float(min(abs(a[i] - a[j]) for i in range(a.size) for j in range(i)))


def loop_vertices(positions, t, base, side):
    """Base -> below pole ``t`` -> counterclockwise square of the given side -> base."""
    a = positions[t]
    h = side / 2
    entry = a - 1j * h
    square = [entry, a + h - 1j * h, a + h + 1j * h, a - h + 1j * h, a - h - 1j * h, entry]
    return [base, *square, base]


def monodromy(A: RationalMatrix, base=None, ordering=None, tol=ODE_TOL,
              side_ratio=0.5, clearance=0.2) -> MonodromyTuple:
    """Monodromy of ``dY/dz = A(z) Y`` around each (simple) pole.

    Loops are squares of side ``side_ratio * min_gap`` joined to ``base`` by
    straight segments; a segment passing within ``clearance * min_gap`` of
    another pole is rejected.  ``M_t`` is the transport around loop ``t``
    starting from the identity at ``base``.  The default ordering sorts
    poles by the argument of ``a_t - base``, which makes the ordered
    product the loop around all poles, trivial when infinity is not a pole.
    """
    if not A.is_simple():
        raise ValueError("monodromy needs simple poles")
    pos = list(A.positions)
    gap = min_gap(pos)
    base = default_base(pos) if base is None else complex(base)
    side = side_ratio * gap
    for a in pos:
        if abs(a - base) < side:
            raise GeometryError(f"base point {base} is too close to the pole {a}")
    loops = [loop_vertices(pos, t, base, side) for t in range(len(pos))]
    for t, verts in enumerate(loops):
        for s, a in enumerate(pos):
            if s == t:
                continue
            d = min(_segment_distance(verts[0], verts[1], a), _segment_distance(verts[-2], verts[-1], a))
            if d < clearance * gap:
                raise GeometryError(
                    f"loop around pole {t} passes within {d:.3g} of pole {s}; choose another base point")
    if ordering is None:
        ordering = sorted(range(len(pos)), key=lambda t: np.angle(pos[t] - base))
    mats = [transport(A, verts, tol) for verts in loops]
    inf_res = -sum(A.residues) if A.residues else None
    return MonodromyTuple(base, loops, mats, list(ordering), tol, inf_res)


def check_nonresonant(A: RationalMatrix, tol=1e-8):
    for t, R in enumerate(A.residues):
        ev = np.linalg.eigvals(R)
        for i in range(len(ev)):
            for j in range(i):
                diff = ev[i] - ev[j]
                if abs(diff) > tol and abs(diff - np.round(diff.real)) < tol:
                    raise ResonanceError(f"residue {t} has eigenvalues differing by an integer: {ev}")


def class_mismatch(A: RationalMatrix, mono: MonodromyTuple) -> float:
    """Largest distance between eigenvalues of ``M_t`` and ``exp(2 pi i eig(A_t))``."""
    check_nonresonant(A)
    worst = 0.0
    for R, M in zip(A.residues, mono.matrices):
        expected = np.exp(2j * np.pi * np.linalg.eigvals(R))
        got = np.linalg.eigvals(M)
        # match greedily; spectra are small
        remaining = list(got)
        for e in expected:
            k = int(np.argmin([abs(e - g) for g in remaining]))
            worst = max(worst, abs(e - remaining.pop(k)))
    return worst


def trace_functions(mono: MonodromyTuple) -> np.ndarray:
    """``tr M_i`` followed by ``tr(M_i M_j)`` for ``i < j``."""
    M = mono.matrices
    vals = [np.trace(m) for m in M]
    vals += [np.trace(M[i] @ M[j]) for i in range(len(M)) for j in range(i + 1, len(M))]
    return np.array(vals)


def schlesinger_rhs(positions, residues, moving, velocity):
    """``dA_i = [A_j, A_i] / (a_j - a_i) da_j`` for the moving pole ``j``; ``sum A`` is fixed."""
    j = moving
    out = np.zeros_like(residues)
    for i in range(len(positions)):
        if i == j:
            continue
        c = (residues[j] @ residues[i] - residues[i] @ residues[j]) / (positions[j] - positions[i])
        out[i] += c * velocity
        out[j] -= c * velocity
    return out


def schlesinger_flow(A: RationalMatrix, moving, path, tol=ODE_TOL, min_distance=1e-3) -> RationalMatrix:
    """Move pole ``moving`` along the polygon ``path`` keeping the monodromy fixed.

    ``path[0]`` must be the current position of the pole.
    """
    if not A.is_simple():
        raise ValueError("Schlesinger flow needs simple poles")
    pos = list(A.positions)
    path = [complex(p) for p in path]
    if abs(path[0] - pos[moving]) > 1e-12:
        raise ValueError("path must start at the moving pole")
    n, m = A.n, len(pos)
    R = np.array(A.residues)
    for p0, p1 in zip(path[:-1], path[1:]):
        for s, a in enumerate(pos):
            if s != moving and _segment_distance(p0, p1, a) < min_distance:
                raise GeometryError(f"moving pole comes within {min_distance:g} of pole {s}")
        if p1 == p0:
            continue
        v = p1 - p0

        def rhs(s, y, p0=p0, v=v):
            cur = list(pos)
            cur[moving] = p0 + s * v
            return schlesinger_rhs(cur, y.reshape(m, n, n), moving, v).ravel()

        sol = solve_ivp(rhs, (0.0, 1.0), R.ravel(), method="DOP853", rtol=tol, atol=tol)
        if not sol.success:
            raise RuntimeError(f"Schlesinger integration failed: {sol.message}")
        R = sol.y[:, -1].reshape(m, n, n)
        pos[moving] = p1
    return RationalMatrix.simple(pos, list(R), A.poly if len(A.poly) else None)


def normalize_infinity(A: RationalMatrix, c) -> RationalMatrix:
    """Move a simple pole at infinity to a finite point via ``w = 1/(z - c)``.

    Poles ``a_t`` go to ``1/(a_t - c)`` with the same residues, infinity goes
    to ``w = 0`` with residue ``-sum_t A_t``; ``c`` must not be a pole.
    """
    if not A.is_simple() or len(A.poly):
        raise ValueError("normalisation expects sum_t A_t/(z - a_t) with no polynomial part")
    c = complex(c)
    if any(abs(a - c) < 1e-12 for a in A.positions):
        raise GeometryError("the centre of the Moebius move must not be a pole")
    pos = [1 / (a - c) for a in A.positions] + [0j]
    res = list(A.residues) + [-sum(A.residues)]
    return RationalMatrix.simple(pos, res)
