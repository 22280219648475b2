"""Matrix-valued rational functions in partial-fraction form.

``A(z) = sum_t sum_i A_{t,i} (z - a_t)^-i + sum_m P_m z^m``.  Pole positions
are exact input data, so products are decomposed again by Laurent expansion
at each known pole and at infinity; no root finding or polynomial GCD is
involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np


class PoleCollisionError(ValueError):
    """Two pole positions coincide."""


def _stack(arr, n):
    arr = np.array(arr, dtype=complex)
    if arr.size == 0:
        return np.zeros((0, n, n), dtype=complex)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.shape[1:] != (n, n):
        raise ValueError(f"expected {n}x{n} coefficients, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class RationalMatrix:
    """``n x n`` rational matrix with poles at ``positions``.

    ``parts[t][i-1]`` multiplies ``(z - positions[t])**-i``; ``poly[m]``
    multiplies ``z**m``.
    """

    positions: tuple
    parts: tuple
    poly: np.ndarray

    def __post_init__(self):
        positions = tuple(complex(a) for a in self.positions)
        if len(set(positions)) != len(positions):
            raise PoleCollisionError(f"pole positions must be distinct: {positions}")
        if len(self.parts) != len(positions):
            raise ValueError("need one principal part per pole")
        parts = [np.array(p, dtype=complex) for p in self.parts]
        poly = np.array(self.poly, dtype=complex)
        n = parts[0].shape[-1] if parts else poly.shape[-1]
        parts = tuple(_stack(p, n) for p in parts)
        poly = _stack(poly, n)
        for p in parts:
            if p.shape[0] == 0:
                raise ValueError("each pole needs at least one coefficient")
            p.setflags(write=False)
        poly.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "poly", poly)

    @classmethod
    def simple(cls, positions, residues, poly=None):
        """``sum_t R_t/(z - a_t) (+ poly)``."""
        residues = [np.asarray(R, dtype=complex) for R in residues]
        n = residues[0].shape[0] if residues else np.asarray(poly).shape[-1]
        return cls(tuple(positions), tuple(R[None] for R in residues),
                   np.zeros((0, n, n)) if poly is None else poly)

    @classmethod
    def constant(cls, C):
        C = np.asarray(C, dtype=complex)
        return cls((), (), C[None])

    @property
    def n(self) -> int:
        return self.poly.shape[1]

    @property
    def orders(self):
        return [p.shape[0] for p in self.parts]

    @property
    def residues(self):
        return [p[0] for p in self.parts]

    def is_simple(self) -> bool:
        return all(k == 1 for k in self.orders)

    def __call__(self, z):
        out = np.zeros((self.n, self.n), dtype=complex)
        for a, p in zip(self.positions, self.parts):
            u = 1 / (z - a)
            for i, C in enumerate(p, start=1):
                out += C * u**i
        for m, C in enumerate(self.poly):
            out += C * z**m
        return out

    def with_parts(self, parts) -> "RationalMatrix":
        return RationalMatrix(self.positions, tuple(parts), self.poly)

    def map(self, f) -> "RationalMatrix":
        """Apply a linear map to every coefficient matrix."""
        return RationalMatrix(self.positions, tuple(f(p) for p in self.parts), f(self.poly))

    def trace(self) -> "RationalMatrix":
        return self.map(lambda c: np.trace(c, axis1=1, axis2=2)[:, None, None])

    def __add__(self, other):
        if self.positions != other.positions:
            raise ValueError("addition needs identical pole sets")
        parts = []
        for p, q in zip(self.parts, other.parts):
            k = max(len(p), len(q))
            s = np.zeros((k, *p.shape[1:]), dtype=complex)
            s[:len(p)] += p
            s[:len(q)] += q
            parts.append(s)
        L = max(len(self.poly), len(other.poly))
        poly = np.zeros((L, self.n, self.n), dtype=complex)
        poly[:len(self.poly)] += self.poly
        poly[:len(other.poly)] += other.poly
        return RationalMatrix(self.positions, tuple(parts), poly)

    def __mul__(self, c):
        return self.map(lambda p: p * c)

    __rmul__ = __mul__

    def taylor(self, z0, order, skip=None) -> np.ndarray:
        """First ``order`` Taylor coefficients at ``z0`` of everything except pole ``skip``."""
        out = np.zeros((order, self.n, self.n), dtype=complex)
        for t, (a, p) in enumerate(zip(self.positions, self.parts)):
            if t == skip:
                continue
            delta = z0 - a
            if delta == 0:
                raise PoleCollisionError(f"Taylor expansion requested at the pole {a}")
            for i, C in enumerate(p, start=1):
                for l in range(order):
                    out[l] += C * ((-1) ** l * comb(i + l - 1, l) * delta ** (-i - l))
        for m, C in enumerate(self.poly):
            for l in range(min(order, m + 1)):
                out[l] += C * (comb(m, l) * z0 ** (m - l))
        return out

    def at_infinity(self, order) -> np.ndarray:
        """Coefficients of ``z**-1 .. z**-order`` of the principal parts at infinity."""
        out = np.zeros((order, self.n, self.n), dtype=complex)
        for a, p in zip(self.positions, self.parts):
            for i, C in enumerate(p, start=1):
                for m in range(order - i + 1):
                    out[i + m - 1] += C * (comb(i + m - 1, m) * a**m)
        return out

    def __matmul__(self, other) -> "RationalMatrix":
        if self.positions != other.positions:
            raise ValueError("products need identical pole sets")
        parts = []
        for t, (p, q) in enumerate(zip(self.parts, other.parts)):
            a = self.positions[t]
            kp, kq = len(p), len(q)
            out = np.zeros((kp + kq, self.n, self.n), dtype=complex)
            for i in range(kp):
                for j in range(kq):
                    out[i + j + 1] += p[i] @ q[j]
            # principal x regular: (z-a)^-i (z-a)^l contributes to order i-l
            tq = other.taylor(a, kp, skip=t)
            tp = self.taylor(a, kq, skip=t)
            for i in range(1, kp + 1):
                for l in range(i):
                    out[i - l - 1] += p[i - 1] @ tq[l]
            for j in range(1, kq + 1):
                for l in range(j):
                    out[j - l - 1] += tp[l] @ q[j - 1]
            parts.append(out)
        Lp, Lq = len(self.poly), len(other.poly)
        if Lp and Lq:
            L = Lp + Lq - 1
        else:
            L = max(Lp - 1, Lq - 1, 0)
        poly = np.zeros((L, self.n, self.n), dtype=complex)
        for i in range(Lp):
            for j in range(Lq):
                poly[i + j] += self.poly[i] @ other.poly[j]
        # polynomial x expansion at infinity: z^m z^-l contributes to degree m-l >= 0
        if Lp > 1:
            eq = other.at_infinity(Lp - 1)
            for m in range(1, Lp):
                for l in range(1, m + 1):
                    poly[m - l] += self.poly[m] @ eq[l - 1]
        if Lq > 1:
            ep = self.at_infinity(Lq - 1)
            for m in range(1, Lq):
                for l in range(1, m + 1):
                    poly[m - l] += ep[l - 1] @ other.poly[m]
        return RationalMatrix(self.positions, tuple(parts), poly)

    def power(self, p) -> "RationalMatrix":
        out = identity_like(self)
        for _ in range(p):
            out = out @ self
        return out


def identity_like(A: RationalMatrix) -> RationalMatrix:
    n = A.n
    return RationalMatrix(A.positions, tuple(np.zeros((1, n, n)) for _ in A.positions),
                          np.eye(n)[None])


def pole_power(A: RationalMatrix, t, i) -> RationalMatrix:
    """``(z - a_t)**-i`` times the identity, on the pole set of ``A``."""
    n = A.n
    parts = [np.zeros((1, n, n)) for _ in A.positions]
    parts[t] = np.zeros((i, n, n))
    parts[t][i - 1] = np.eye(n)
    return RationalMatrix(A.positions, tuple(parts), np.zeros((0, n, n)))
