import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from wildmoduli.irregular import (ConditioningError, CurveSpec, GroupSpec, IrregularType, MarkedPoint,
                                  NonGenericError, ResidueData, StructureError, mstar_dim,
                                  numerical_rank, orbit_dim, very_good_point)
from wildmoduli.jetcore import Jet, PrincipalPart

SL2, GL3 = GroupSpec.SL(2), GroupSpec.GL(3)


def exact_orbit_dim(B_int, family="GL"):
    """Rank of X -> principal part of [X, B] over Q, built entry by entry."""
    k, n, _ = B_int.shape
    Bs = [sympy.Matrix(b) for b in B_int]
    cols = []
    basis = []
    for j in range(k):
        for a in range(n):
            for b in range(n):
                E = sympy.zeros(n, n)
                E[a, b] = 1
                basis.append((j, E))
    if family == "SL":
        # replace diagonal units by differences E_aa - E_{a+1,a+1}
        keep = [(j, E) for j, E in basis if not any(E[a, a] for a in range(n))]
        for j in range(k):
            for a in range(n - 1):
                H = sympy.zeros(n, n)
                H[a, a], H[a + 1, a + 1] = 1, -1
                keep.append((j, H))
        basis = keep
    for j, E in basis:
        col = []
        for i in range(1, k + 1):
            C = sympy.zeros(n, n)
            if i + j <= k:
                C = E * Bs[i + j - 1] - Bs[i + j - 1] * E
            col.extend(list(C))
        cols.append(col)
    return sympy.Matrix(cols).T.rank()


def pii_type():
    return IrregularType((([0, 0, 1], 1), ([0, 0, -1], 1)))


def test_group_specs():
    assert (SL2.dim, SL2.center_dim, SL2.torus_dim) == (3, 0, 1)
    assert (GL3.dim, GL3.center_dim, GL3.torus_dim) == (9, 1, 3)
    assert GroupSpec.raw("G2", 14, 0, 2).rank == 2


def test_very_good_point_examples():
    B = very_good_point(None, ResidueData.tame([0.5, -1.0]))
    assert B.k == 1 and np.allclose(B.coeffs[0], np.diag([0.5, -1.0]))
    c = 1.7
    Q = IrregularType((([c], 1), ([-c], 1)))
    B = very_good_point(Q, ResidueData((((0, 1),), ((0, 1),))))
    assert B.k == 2
    assert np.allclose(B.coeffs[1], -np.diag([c, -c])) and np.allclose(B.coeffs[0], 0)
    B = very_good_point(pii_type(), ResidueData((((0.7, 1),), ((-0.7, 1),))))
    assert B.k == 4
    lead = np.diag(B.coeffs[3])
    assert np.allclose(B.coeffs[3], np.diag(lead)) and lead[0] != lead[1]


def test_very_good_point_structure_error():
    Q = IrregularType((([1.0], 2), ([-1.0], 1)))
    with pytest.raises(StructureError):
        very_good_point(Q, ResidueData((((0.1, 1),), ((0.2, 2),))))
    # refinement inside a block is allowed
    B = very_good_point(Q, ResidueData((((0.1, 1), (0.3, 1)), ((0.2, 1),))))
    assert np.allclose(np.diag(B.coeffs[0]), [0.1, 0.3, 0.2])


def test_irregular_type_validation():
    with pytest.raises(ValueError):
        IrregularType((([1, 2], 1), ([1, 2, 0], 1)))
    with pytest.raises(ValueError):
        IrregularType((([1], 0),))


def test_orbit_dim_examples():
    for n in (2, 3, 4):
        B = PrincipalPart(np.diag(np.arange(1, n + 1) * 0.7)[None])
        assert orbit_dim(B, GroupSpec.GL(n)) == n * n - n
    B = very_good_point(pii_type(), ResidueData((((0.7, 1),), ((-0.7, 1),))))
    assert orbit_dim(B, SL2) == 8
    Q = IrregularType((([1.0], 1), ([2.0], 1), ([-3.5], 1)))
    B = very_good_point(Q, ResidueData((((0.3, 1),), ((-1.1, 1),), ((0.45, 1),))))
    assert orbit_dim(B, GL3) == 12


def test_orbit_dim_against_exact_oracle():
    rng = np.random.default_rng(3)
    for n, k, fam in [(2, 1, "GL"), (2, 3, "SL"), (3, 2, "GL"), (3, 2, "SL"), (2, 4, "SL")]:
        Bi = rng.integers(-3, 4, size=(k, n, n))
        G = GroupSpec.GL(n) if fam == "GL" else GroupSpec.SL(n)
        assert orbit_dim(PrincipalPart(Bi), G) == exact_orbit_dim(Bi, fam)
    # non-regular data: scalar leading term gives a bigger stabilizer
    Bi = np.array([[[1, 2], [0, 1]], [[2, 0], [0, 2]]])
    assert orbit_dim(PrincipalPart(Bi), GroupSpec.GL(2)) == exact_orbit_dim(Bi)


def random_very_good(rng, n, k):
    """Regular data with eigenvalue gaps of order one, so the rank is well conditioned."""
    lam = rng.permutation(n) + 0.2 * rng.standard_normal(n) + 0.5
    qs = None
    if k > 1:
        qs = rng.standard_normal((n, k - 1))
        qs[:, -1] = rng.permutation(n) + 1 + 0.2 * rng.standard_normal(n)
    if qs is None:
        return very_good_point(None, ResidueData.tame(lam))
    Q = IrregularType(tuple((q, 1) for q in qs))
    return very_good_point(Q, ResidueData(tuple((((l, 1),)) for l in lam)))


@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(1, 4), st.sampled_from(["GL", "SL"]))
def test_orbit_dim_even_and_closed_form(seed, n, k, fam):
    rng = np.random.default_rng(seed)
    B = random_very_good(rng, n, k)
    G = GroupSpec.GL(n) if fam == "GL" else GroupSpec.SL(n)
    d = orbit_dim(B, G)
    assert d % 2 == 0
    assert d == k * (G.dim - G.torus_dim)


@given(st.integers(0, 2**31), st.integers(2, 3), st.integers(1, 4))
def test_orbit_dim_conjugation_invariant(seed, n, k):
    rng = np.random.default_rng(seed)
    B = random_very_good(rng, n, k)
    X = Jet(0.4 * (rng.standard_normal((k, n, n)) + 1j * rng.standard_normal((k, n, n))))
    G = GroupSpec.GL(n)
    assert orbit_dim(B.conjugate_by(X.exp()), G) == orbit_dim(B, G)


def test_conditioning_guard():
    M = np.diag([1.0, 1e-8])
    with pytest.raises(ConditioningError):
        numerical_rank(M)
    assert numerical_rank(np.diag([1.0, 1e-3])) == 2
    assert numerical_rank(np.diag([1.0, 1e-14])) == 1


def test_mstar_dim_examples():
    pii = CurveSpec((MarkedPoint(None, 4, pii_type(), ResidueData((((0.7, 1),), ((-0.7, 1),)))),))
    assert mstar_dim(pii, SL2) == 2
    four = CurveSpec(tuple(MarkedPoint(complex(a), 1, residue=ResidueData.tame([lam, -lam]))
                           for a, lam in zip(range(4), (0.3, 0.2, 0.45, 0.1))))
    assert mstar_dim(four, SL2) == 2
    one = CurveSpec((MarkedPoint(0j, 1, residue=ResidueData.tame([0.4])),))
    assert mstar_dim(one, GroupSpec.GL(1)) == 0


def test_mstar_dim_non_generic():
    three = CurveSpec(tuple(MarkedPoint(complex(a), 1, residue=ResidueData.tame([0.2, -0.2]))
                            for a in range(2)))
    with pytest.raises(NonGenericError) as exc:
        mstar_dim(three, SL2)
    assert exc.value.value == -2


def test_marked_point_validation():
    with pytest.raises(ValueError):
        MarkedPoint(0j, 2, residue=ResidueData.tame([1, -1]))
    with pytest.raises(ValueError):
        MarkedPoint(0j, 3, pii_type(), ResidueData((((0.7, 1),), ((-0.7, 1),))))
    with pytest.raises(ValueError):
        CurveSpec((MarkedPoint(0j, 1), MarkedPoint(0j, 1)))
    with pytest.raises(ValueError):
        CurveSpec((), genus=1)
