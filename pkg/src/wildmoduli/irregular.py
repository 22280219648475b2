"""Irregular types, very good orbit points and moduli dimension counts.

An irregular type at a pole is a diagonal polar term ``Q = sum_i A_i / z**i``.
It is stored block by block: each block is an eigenvalue polynomial ``q`` in
``t = 1/z`` with zero constant term (coefficients of ``t, t**2, ...``) and the
multiplicity of that eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from .jetcore import DimensionError, PrincipalPart

RANK_RTOL = 1e-8
CONDITIONING_GAP = 1e3


class StructureError(ValueError):
    """Residue data does not refine the block structure of the irregular type."""


class ConditioningError(ArithmeticError):
    """A numerical rank is too close to the singular-value threshold to trust."""


class NonGenericError(ValueError):
    """A dimension count came out negative: empty or non-generic configuration."""

    def __init__(self, message, value):
        super().__init__(message)
        self.value = value


@dataclass(frozen=True)
class GroupSpec:
    family: str
    n: int
    dim: int
    center_dim: int
    torus_dim: int

    @classmethod
    def GL(cls, n):
        return cls("GL", n, n * n, 1, n)

    @classmethod
    def SL(cls, n):
        return cls("SL", n, n * n - 1, 0, n - 1)

    @classmethod
    def raw(cls, family, dim, center_dim=0, torus_dim=0, n=0):
        """Bookkeeping-only group, e.g. ``GroupSpec.raw("G2", 14, 0, 2)``."""
        return cls(family, n, dim, center_dim, torus_dim)

    @property
    def rank(self) -> int:
        return self.torus_dim

    @property
    def is_matrix_group(self) -> bool:
        return self.family in ("GL", "SL")


def poly_degree(coeffs) -> int:
    """Degree of ``sum_i coeffs[i-1] t**i``; the zero polynomial has degree 0."""
    nz = np.flatnonzero(np.asarray(coeffs) != 0)
    return int(nz[-1]) + 1 if nz.size else 0


def _trim(coeffs):
    c = np.asarray(coeffs, dtype=complex).ravel()
    return c[:poly_degree(c)]


@dataclass(frozen=True, eq=False)
class IrregularType:
    """Blocks ``(q, mult)``; ``q[i-1]`` is the coefficient of ``z**-i``."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple((_trim(q), int(m)) for q, m in self.blocks)
        if not blocks:
            raise ValueError("an irregular type needs at least one block")
        for q, m in blocks:
            if m < 1:
                raise ValueError(f"block multiplicity must be positive, got {m}")
        for a in range(len(blocks)):
            for b in range(a):
                if _same_poly(blocks[a][0], blocks[b][0]):
                    raise ValueError(f"eigenvalue polynomials of blocks {b} and {a} coincide")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(m for _, m in self.blocks)

    @property
    def mults(self):
        return [m for _, m in self.blocks]

    @property
    def degree(self) -> int:
        return max(len(q) for q, _ in self.blocks)

    @property
    def pole_order(self) -> int:
        """Pole order ``k`` of ``dQ + Lambda dz/z``."""
        return self.degree + 1

    def coefficient(self, i) -> np.ndarray:
        """Diagonal of ``A_i``."""
        return np.concatenate([np.full(m, q[i - 1] if i <= len(q) else 0.0, dtype=complex)
                               for q, m in self.blocks])


def _same_poly(p, q):
    if len(p) != len(q):
        return False
    return bool(np.all(p == q))


@dataclass(frozen=True, eq=False)
class ResidueData:
    """Per block of an irregular type, eigenvalues ``(lam, mult)`` of ``Lambda``."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple((complex(lam), int(m)) for lam, m in blk) for blk in self.blocks)
        for blk in blocks:
            for _, m in blk:
                if m < 1:
                    raise StructureError(f"eigenvalue multiplicity must be positive, got {m}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def tame(cls, eigenvalues):
        """Single block holding ``eigenvalues`` each once."""
        return cls((tuple((lam, 1) for lam in eigenvalues),))

    @property
    def block_sizes(self):
        return [sum(m for _, m in blk) for blk in self.blocks]

    def diagonal(self) -> np.ndarray:
        return np.array([lam for blk in self.blocks for lam, m in blk for _ in range(m)],
                        dtype=complex)


def very_good_point(Q: IrregularType | None, Lam: ResidueData) -> PrincipalPart:
    """The point ``dQ + Lambda dz/z`` of the dual jet algebra.

    ``B_1 = diag(Lambda)`` and ``B_{i+1} = -i A_i``.  ``Q=None`` is the tame
    case, a simple pole with residue ``Lambda``.
    """
    lam = Lam.diagonal()
    if Q is None:
        if len(Lam.blocks) != 1:
            raise StructureError("tame residue data must form a single block")
        return PrincipalPart(np.diag(lam)[None])
    if Lam.block_sizes != Q.mults:
        raise StructureError(
            f"residue blocks {Lam.block_sizes} do not match irregular type blocks {Q.mults}")
    k = Q.pole_order
    B = np.zeros((k, Q.n, Q.n), dtype=complex)
    B[0] = np.diag(lam)
    for i in range(1, k):
        B[i] = -i * np.diag(Q.coefficient(i))
    return PrincipalPart(B)


def _ad_operator(C):
    # row-major vec: vec([X, C]) = (I (x) C^T - C (x) I) vec(X)
    n = C.shape[0]
    eye = np.eye(n)
    return np.kron(eye, C.T) - np.kron(C, eye)


def _traceless_basis(n):
    cols = []
    for a in range(n):
        for b in range(n):
            if a != b:
                E = np.zeros((n, n))
                E[a, b] = 1
                cols.append(E.ravel())
    for a in range(n - 1):
        H = np.zeros((n, n))
        H[a, a], H[a + 1, a + 1] = 1, -1
        cols.append(H.ravel())
    return np.array(cols, dtype=complex).T


def stabilizer_operator(B: PrincipalPart, G: GroupSpec) -> np.ndarray:
    """Matrix of ``X -> coadjoint_action(X, B)`` on the jet Lie algebra of ``G``."""
    if not G.is_matrix_group:
        raise ValueError(f"orbit computations need GL or SL, got {G.family}")
    if B.n != G.n:
        raise DimensionError(f"principal part is {B.n}x{B.n} but group has rank {G.n}")
    n, k = B.n, B.k
    nn = n * n
    M = np.zeros((k * nn, k * nn), dtype=complex)
    for i in range(1, k + 1):
        for j in range(k - i + 1):
            M[(i - 1) * nn:i * nn, j * nn:(j + 1) * nn] = _ad_operator(B.coeffs[i + j - 1])
    if G.family == "SL":
        P = np.kron(np.eye(k), _traceless_basis(n))
        M = M @ P
    return M


def numerical_rank(M, rtol=RANK_RTOL, gap=CONDITIONING_GAP) -> int:
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    tau = rtol * s[0]
    near = s[(s > tau / gap) & (s < tau * gap)]
    if near.size:
        raise ConditioningError(
            f"singular values {near} lie within a factor {gap:g} of the threshold {tau:.3g}; "
            "perturb the data")
    return int(np.sum(s > tau))


def orbit_dim(B: PrincipalPart, G: GroupSpec) -> int:
    """Dimension of the coadjoint orbit of ``B`` under the jet group ``G_k``.

    Equals ``dim G_k - dim stab(B)``, i.e. the rank of the infinitesimal
    coadjoint action at ``B``.
    """
    M = stabilizer_operator(B, G)
    rank = numerical_rank(M)
    stab = M.shape[1] - rank
    dim = B.k * G.dim - stab
    assert dim == rank
    return dim


@dataclass(frozen=True, eq=False)
class MarkedPoint:
    """A pole of order ``order`` at ``position`` (``None`` means infinity).

    ``position`` is bookkeeping only: the local data is always given in a
    coordinate centred at the pole.
    """

    position: complex | None
    order: int
    irregular_type: IrregularType | None = None
    residue: ResidueData | None = None
    principal_part: PrincipalPart | None = None

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"pole order must be >= 1, got {self.order}")
        if self.principal_part is None:
            if (self.irregular_type is not None) != (self.order > 1):
                raise ValueError("an irregular type is required exactly when the pole order exceeds 1")
            if self.irregular_type is not None and self.irregular_type.pole_order != self.order:
                raise ValueError(
                    f"irregular type gives pole order {self.irregular_type.pole_order}, "
                    f"point declares {self.order}")
        elif self.principal_part.k != self.order:
            raise ValueError("principal part order does not match the declared pole order")

    def point(self) -> PrincipalPart:
        if self.principal_part is not None:
            return self.principal_part
        if self.residue is None:
            raise ValueError("marked point carries no residue data")
        return very_good_point(self.irregular_type, self.residue)


@dataclass(frozen=True)
class CurveSpec:
    """Marked points on the Riemann sphere (genus 0 only)."""

    points: tuple = field(default_factory=tuple)
    genus: int = 0

    def __post_init__(self):
        if self.genus != 0:
            raise ValueError("only genus 0 curves are supported here")
        pos = [p.position for p in self.points]
        for a in range(len(pos)):
            for b in range(a):
                if pos[a] == pos[b]:
                    raise ValueError(f"marked points {b} and {a} coincide")
        object.__setattr__(self, "points", tuple(self.points))


def mstar_dim(curve: CurveSpec, G: GroupSpec) -> int:
    """``sum_i orbit_dim(B_i) - 2 (dim G - dim Z(G))`` for generic data."""
    total = sum(orbit_dim(p.point(), G) for p in curve.points)
    dim = total - 2 * (G.dim - G.center_dim)
    if dim < 0:
        raise NonGenericError(f"dimension count {dim} < 0: empty or non-generic configuration", dim)
    return dim
