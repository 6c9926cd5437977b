import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadembed.core import QuadPoly
from quadembed.errors import NearSingularGram, NotInvariantPair, NotMinimal
from quadembed.invariant import relative_residual
from quadembed.unstructured import (FreeParamsZ, family_with_pair, gram_inverse, mup_update,
                                    no_spillover_update_known_fixed, stacked)
from support import greedy_mismatch, oracle_eigpairs, oracle_eigvals, rel


def eig_pair(Q, idx):
    lam, X = oracle_eigpairs(Q.M, Q.D, Q.K)
    X = X / np.linalg.norm(X, axis=0)
    return X[:, idx], np.diag(lam[idx])


def random_Q(rng, n, sym=False):
    A, B, C = (rng.standard_normal((n, n)) for _ in range(3))
    if sym:
        A, B, C = A @ A.T + n * np.eye(n), B + B.T, C @ C.T + n * np.eye(n)
    return QuadPoly(A + (0 if sym else n * np.eye(n)), B, C)


def test_family_hand_example():
    # X = e1, Lam = 0: stacked matrix [0; 0; e1], Q_X = 1, K = Z3 (I - e1 e1^T)
    X = np.array([[1.0], [0.0]])
    Q = family_with_pair(X, np.zeros((1, 1)), FreeParamsZ(Z3=np.eye(2)))
    assert np.allclose(Q.K, [[0, 0], [0, 1]])
    assert not np.any(Q.M) and not np.any(Q.D)
    assert not np.any(Q.K @ X)


def test_family_zero_params():
    rng = np.random.default_rng(0)
    Q = family_with_pair(rng.standard_normal((4, 2)), np.diag([1.0, 2.0]))
    assert not np.any(Q.M) and not Q.is_regular()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.booleans())
def test_family_contains_pair(seed, cplx):
    rng = np.random.default_rng(seed)
    n, p = 5, 3
    X = rng.standard_normal((n, p)) + (1j * rng.standard_normal((n, p)) if cplx else 0)
    Lam = rng.standard_normal((p, p))
    Q = family_with_pair(X, Lam, FreeParamsZ.random(n, n, rng, complex_=cplx))
    assert relative_residual(Q, X, Lam) <= 1e-10


def test_family_not_minimal():
    e1 = np.eye(3)[:, [0, 0]]
    with pytest.raises(NotMinimal):
        family_with_pair(e1, np.eye(2))


def test_gram_inverse_near_singular():
    X = np.ones((6, 2))
    X[0, 1] += 1e-14
    with pytest.raises((NearSingularGram, NotMinimal)):
        gram_inverse(X)


def test_mup_identity_update_is_zero():
    rng = np.random.default_rng(1)
    Q = random_Q(rng, 4)
    Xc, Lc = eig_pair(Q, [0, 1])
    d = mup_update(Q, Xc, Lc, Lc)
    assert max(np.abs(A).max() for A in d) <= 1e-12


def test_mup_places_aimed_eigenvalues():
    rng = np.random.default_rng(2)
    Q = random_Q(rng, 4)
    Xc, Lc = eig_pair(Q, [0, 1])
    La = Lc + np.diag([0.5, -0.3])
    Qn = Q.perturbed(mup_update(Q, Xc, Lc, La))
    new = oracle_eigvals(Qn.M, Qn.D, Qn.K)
    for lam in np.diag(La):
        assert np.min(np.abs(new - lam)) <= 1e-6 * max(1, abs(lam))


@pytest.mark.parametrize("seed", range(5))
def test_mup_random_Z(seed):
    rng = np.random.default_rng(seed)
    Q = random_Q(rng, 4)
    Xc, Lc = eig_pair(Q, [0, 2])
    La = Lc + np.diag([0.4, 0.7])
    d = mup_update(Q, Xc, Lc, La, FreeParamsZ.random(4, 4, rng))
    assert relative_residual(Q.perturbed(d), Xc, La) <= 1e-10


def test_mup_zero_z_is_pseudoinverse_solution():
    rng = np.random.default_rng(3)
    Q = random_Q(rng, 4)
    Xc, Lc = eig_pair(Q, [1, 3])
    La = Lc + np.diag([0.2, 0.3])
    d = mup_update(Q, Xc, Lc, La)
    Xt = stacked(Xc, La)
    B = Q.M @ Xc @ (Lc @ Lc - La @ La) + Q.D @ Xc @ (Lc - La)
    assert rel(np.hstack(list(d)), B @ np.linalg.pinv(Xt)) <= 1e-10


def test_mup_z_acts_on_null_space_only():
    rng = np.random.default_rng(4)
    Q = random_Q(rng, 4)
    Xc, Lc = eig_pair(Q, [0, 1])
    La = Lc + np.diag([0.2, 0.3])
    Xt = stacked(Xc, La)
    base = np.hstack(list(mup_update(Q, Xc, Lc, La))) @ Xt
    for _ in range(5):
        d = mup_update(Q, Xc, Lc, La, FreeParamsZ.random(4, 4, rng))
        assert rel(np.hstack(list(d)) @ Xt, base) <= 1e-10


def test_mup_rejects_non_invariant_pair():
    rng = np.random.default_rng(5)
    Q = random_Q(rng, 4)
    with pytest.raises(NotInvariantPair):
        mup_update(Q, rng.standard_normal((4, 2)), np.eye(2), 2 * np.eye(2))


def test_known_fixed_trivial():
    rng = np.random.default_rng(6)
    Q = random_Q(rng, 4)
    Xc, Lc = eig_pair(Q, [0, 1])
    Xf, Lf = eig_pair(Q, [2, 3])
    d = no_spillover_update_known_fixed(Q, (Xc, Lc), (Xf, Lf), (Xc, Lc))
    assert max(np.abs(A).max() for A in d) <= 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_known_fixed_symmetric(seed):
    rng = np.random.default_rng(seed)
    Q = random_Q(rng, 6, sym=True)
    Xc, Lc = eig_pair(Q, [0, 1])
    Xf, Lf = eig_pair(Q, [4, 5])
    Xa, La = rng.standard_normal((6, 2)), np.diag([0.3 + 1j, -0.5])
    d0 = no_spillover_update_known_fixed(Q, (Xc, Lc), (Xf, Lf), (Xa, La))
    Qn = Q.perturbed(d0)
    assert relative_residual(Qn, Xa, La) <= 1e-9
    assert relative_residual(Qn, Xf, Lf) <= 1e-9
    new = oracle_eigvals(Qn.M, Qn.D, Qn.K)
    for lam in np.concatenate([np.diag(La), np.diag(Lf)]):
        assert np.min(np.abs(new - lam)) <= 1e-6 * max(1, abs(lam))
    dz = no_spillover_update_known_fixed(Q, (Xc, Lc), (Xf, Lf), (Xa, La),
                                         FreeParamsZ.random(6, 6, rng))
    assert relative_residual(Q.perturbed(dz), Xf, Lf) <= 1e-9


def test_known_fixed_overlap_is_not_minimal():
    rng = np.random.default_rng(8)
    Q = random_Q(rng, 4)
    Xc, Lc = eig_pair(Q, [0, 1])
    Xf, Lf = eig_pair(Q, [2, 3])
    with pytest.raises((NotMinimal, NearSingularGram)):
        no_spillover_update_known_fixed(Q, (Xc, Lc), (Xf, Lf), (Xf, Lf))


def test_known_fixed_keeps_spectrum_count():
    rng = np.random.default_rng(9)
    Q = random_Q(rng, 4)
    Xc, Lc = eig_pair(Q, [0, 1])
    Xf, Lf = eig_pair(Q, list(range(2, 8)))
    d = no_spillover_update_known_fixed(Q, (Xc, Lc), (Xf, Lf), (Xc, Lc + np.diag([0.5, 0.5])))
    Qn = Q.perturbed(d)
    target = np.concatenate([np.diag(Lc) + 0.5, np.diag(Lf)])
    assert greedy_mismatch(target, oracle_eigvals(Qn.M, Qn.D, Qn.K)) <= 1e-6
