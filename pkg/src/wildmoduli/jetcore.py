"""Matrix jets, principal parts and the residue-trace pairing between them.

A jet ``X = sum_j X_j z**j mod z**k`` lives in the Lie algebra of the jet
group ``GL_n(C[z]/z**k)``.  A principal part ``B = sum_i B_i dz/z**i``
(``i = 1..k``) is an element of its dual, paired by ``Res Tr(X B)``.
Both are stored as complex arrays of shape ``(k, n, n)``; for jets index
``j`` is the power of ``z``, for principal parts index ``i - 1`` holds
``B_i``.

All local computations use a coordinate centred at the pole.  For a pole at
infinity the caller substitutes ``w = 1/z`` first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class DimensionError(ValueError):
    """Matrix sizes of two operands disagree."""


class OrderError(ValueError):
    """Truncation orders of two operands disagree."""


def as_matrix_stack(coeffs, n=None) -> np.ndarray:
    arr = np.array(coeffs, dtype=complex)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionError(f"expected a stack of square matrices, got shape {arr.shape}")
    if n is not None and arr.shape[1] != n:
        raise DimensionError(f"expected {n}x{n} matrices, got {arr.shape[1]}x{arr.shape[2]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Jet:
    """Truncated matrix power series ``X_0 + X_1 z + ... + X_{k-1} z**(k-1)``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = as_matrix_stack(self.coeffs)
        if arr.shape[0] < 1:
            raise OrderError("a jet needs k >= 1")
        object.__setattr__(self, "coeffs", arr)

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def k(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def zero(cls, n, k):
        return cls(np.zeros((k, n, n), dtype=complex))

    @classmethod
    def identity(cls, n, k):
        c = np.zeros((k, n, n), dtype=complex)
        c[0] = np.eye(n)
        return cls(c)

    def __add__(self, other):
        _check_same(self, other)
        return Jet(self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_same(self, other)
        return Jet(self.coeffs - other.coeffs)

    def __mul__(self, c):
        return Jet(self.coeffs * c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        _check_same(self, other)
        return Jet(_truncated_product(self.coeffs, other.coeffs, self.k))

    def bracket(self, other) -> "Jet":
        """Commutator ``[self, other]`` in ``gl_n(C[z]/z**k)``."""
        return self @ other - other @ self

    def toeplitz(self) -> np.ndarray:
        """Block lower-triangular Toeplitz matrix of multiplication by the jet.

        Jet products correspond to products of these ``nk x nk`` matrices, so
        inverses and exponentials can be taken there.
        """
        n, k = self.n, self.k
        T = np.zeros((n * k, n * k), dtype=complex)
        for row in range(k):
            for col in range(row + 1):
                T[row * n:(row + 1) * n, col * n:(col + 1) * n] = self.coeffs[row - col]
        return T

    @classmethod
    def from_toeplitz(cls, T, n, k):
        return cls(np.array([T[j * n:(j + 1) * n, 0:n] for j in range(k)]))

    def inverse(self) -> "Jet":
        if abs(np.linalg.det(self.coeffs[0])) < 1e-300:
            raise np.linalg.LinAlgError("jet is not invertible: constant term is singular")
        return Jet.from_toeplitz(np.linalg.inv(self.toeplitz()), self.n, self.k)

    def exp(self) -> "Jet":
        """Group element ``exp(X)`` in ``GL_n(C[z]/z**k)``."""
        return Jet.from_toeplitz(scipy.linalg.expm(self.toeplitz()), self.n, self.k)

    def is_scalar(self, tol=0.0) -> bool:
        eye = np.eye(self.n)
        return all(np.max(np.abs(X - X[0, 0] * eye), initial=0.0) <= tol for X in self.coeffs)


@dataclass(frozen=True, eq=False)
class PrincipalPart:
    """Polar part ``B_1 dz/z + ... + B_k dz/z**k``; ``coeffs[i-1]`` is ``B_i``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = as_matrix_stack(self.coeffs)
        if arr.shape[0] < 1:
            raise OrderError("a principal part needs k >= 1")
        object.__setattr__(self, "coeffs", arr)

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def k(self) -> int:
        return self.coeffs.shape[0]

    @property
    def residue(self) -> np.ndarray:
        return self.coeffs[0]

    @classmethod
    def zero(cls, n, k):
        return cls(np.zeros((k, n, n), dtype=complex))

    def __add__(self, other):
        _check_same(self, other)
        return PrincipalPart(self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_same(self, other)
        return PrincipalPart(self.coeffs - other.coeffs)

    def __mul__(self, c):
        return PrincipalPart(self.coeffs * c)

    __rmul__ = __mul__

    def allclose(self, other, atol=1e-12) -> bool:
        return self.coeffs.shape == other.coeffs.shape and np.allclose(
            self.coeffs, other.coeffs, rtol=0, atol=atol)

    def conjugate_by(self, g: Jet) -> "PrincipalPart":
        """Principal part of ``g B g**-1`` for an invertible jet ``g``."""
        if g.n != self.n:
            raise DimensionError(f"jet is {g.n}x{g.n}, principal part is {self.n}x{self.n}")
        if g.k < self.k:
            raise OrderError(f"group element has order {g.k} < pole order {self.k}")
        h = g.inverse()
        left = _polar_times_jet(self.coeffs, g.coeffs, from_left=True)
        return PrincipalPart(_polar_times_jet(left, h.coeffs, from_left=False))


def _check_same(a, b):
    if a.n != b.n:
        raise DimensionError(f"sizes {a.n} and {b.n} differ")
    if a.k != b.k:
        raise OrderError(f"truncation orders {a.k} and {b.k} differ")


def _truncated_product(a, b, k):
    n = a.shape[1]
    out = np.zeros((k, n, n), dtype=complex)
    for i in range(min(k, a.shape[0])):
        for j in range(min(k - i, b.shape[0])):
            out[i + j] += a[i] @ b[j]
    return out


def _polar_times_jet(polar, jet, from_left):
    # polar[i-1] multiplies z**-i, jet[j] multiplies z**j; keep powers z**-1 and below.
    k = polar.shape[0]
    out = np.zeros_like(polar)
    for i in range(1, k + 1):
        for j in range(min(jet.shape[0], i)):
            term = jet[j] @ polar[i - 1] if from_left else polar[i - 1] @ jet[j]
            out[i - j - 1] += term
    return out


def residue_pairing(X: Jet, B: PrincipalPart) -> complex:
    """``Res Tr(X B) = sum_i Tr(X_{i-1} B_i)``, matching powers of ``z``.

    The truncation orders need not agree; terms beyond either one vanish.
    """
    if X.n != B.n:
        raise DimensionError(f"jet is {X.n}x{X.n}, principal part is {B.n}x{B.n}")
    m = min(X.k, B.k)
    return complex(np.einsum("kij,kji->", X.coeffs[:m], B.coeffs[:m]))


def coadjoint_action(X: Jet, B: PrincipalPart) -> PrincipalPart:
    """Principal part of the commutator ``X B - B X``.

    Its coefficient of ``dz/z**i`` is ``sum_j [X_j, B_{i+j}]``.  With this
    sign, ``<Y, coadjoint_action(X, B)> == <Y.bracket(X), B>`` for every jet
    ``Y`` of the same order.
    """
    if X.n != B.n:
        raise DimensionError(f"jet is {X.n}x{X.n}, principal part is {B.n}x{B.n}")
    if X.k != B.k:
        raise OrderError(f"jet order {X.k} does not match pole order {B.k}")
    k = B.k
    Xc, Bc = X.coeffs, B.coeffs
    out = np.zeros_like(Bc)
    for i in range(1, k + 1):
        for j in range(k - i + 1):
            out[i - 1] += Xc[j] @ Bc[i + j - 1] - Bc[i + j - 1] @ Xc[j]
    return PrincipalPart(out)


def block_diagonal(*parts):
    """Direct sum of jets or of principal parts with a common order."""
    kind = type(parts[0])
    ks = {p.k for p in parts}
    if len(ks) != 1:
        raise OrderError(f"cannot assemble blocks of orders {sorted(ks)}")
    k = ks.pop()
    return kind(np.array([scipy.linalg.block_diag(*(p.coeffs[j] for p in parts))
                          for j in range(k)]))
