"""Eigenvalues of quadratic polynomials via companion linearization.

Used for eigen-data ingestion ("compute" directives, ``quadembed eig``) and as
the independent spectral oracle in the test-suite. None of the perturbation
formulas depend on this module.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from .core import RCOND_MIN, QuadPoly, fro, rcond
from .errors import NotEigenpair, SingularM


def normalize_vector(x):
    """Scale ``x`` so that its entry of largest modulus equals 1."""
    x = np.asarray(x, dtype=complex)
    k = int(np.argmax(np.abs(x)))
    return x / x[k]


def quad_eig(Q: QuadPoly, rcond_min: float = RCOND_MIN):
    """All 2n eigenpairs of ``Q``.

    Uses the pencil ``lam [[I, 0], [0, M]] - [[0, I], [-K, -D]]``, which avoids
    forming ``M^{-1}``. Eigenvectors are normalised to unit largest entry and
    the result is sorted by modulus.

    Returns
    -------
    lam : (2n,) complex array
    X : (n, 2n) complex array
    """
    n = Q.n
    if rcond(Q.M) < rcond_min:
        raise SingularM(f"leading coefficient is numerically singular (rcond={rcond(Q.M):.2e})")
    Z = np.zeros((n, n))
    I = np.eye(n)
    A = np.block([[Z, I], [-Q.K, -Q.D]])
    B = np.block([[I, Z], [Z, Q.M]])
    lam, V = sla.eig(A, B)
    # eigenvectors of the pencil are [x; lam x]
    X = V[:n, :]
    X = np.column_stack([normalize_vector(X[:, j]) for j in range(2 * n)])
    order = np.lexsort((lam.imag, lam.real, np.round(np.abs(lam), 10)))
    return lam[order], X[:, order]


def backward_error(Q: QuadPoly, lam, x) -> float:
    """``|Q(lam) x| / ((|lam|^2 |M| + |lam| |D| + |K|) |x|)``."""
    a = abs(lam)
    den = (a * a * fro(Q.M) + a * fro(Q.D) + fro(Q.K)) * np.linalg.norm(x)
    return float(np.linalg.norm(Q(lam) @ x) / den) if den else 0.0


def null_vector(Q: QuadPoly, lam):
    """Right singular vector of ``Q(lam)`` for its smallest singular value."""
    _, s, Vh = np.linalg.svd(Q(lam))
    return normalize_vector(Vh[-1].conj()), float(s[-1] / max(s[0], np.finfo(float).tiny))


def eigenpair_near(Q: QuadPoly, lam, tol: float = 1e-2, spectrum=None):
    """Eigenpair of ``Q`` whose eigenvalue is closest to ``lam``.

    ``lam`` may be a rounded value (e.g. printed to four decimals); the returned
    eigenvalue is the accurate one. Raises ``NotEigenpair`` if nothing lies
    within ``tol * max(1, |lam|)``.
    """
    w, X = spectrum if spectrum is not None else quad_eig(Q)
    i = int(np.argmin(np.abs(w - lam)))
    if abs(w[i] - lam) > tol * max(1.0, abs(lam)):
        raise NotEigenpair(f"no eigenvalue of Q near {lam} (closest {w[i]})")
    return complex(w[i]), X[:, i]


def match_multisets(a, b):
    """Optimal one-to-one matching of two equally sized complex multisets.

    Returns ``(perm, dist)`` with ``b[perm]`` aligned to ``a`` and ``dist`` the
    elementwise distances, minimising the total distance.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError("multisets differ in size")
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty_like(cols)
    perm[rows] = cols
    return perm, cost[np.arange(a.size), perm]


def max_relative_mismatch(a, b) -> float:
    """Largest ``|a_i - b_pi(i)| / max(1, |a_i|)`` under the optimal matching."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    _, dist = match_multisets(a, b)
    return float(np.max(dist / np.maximum(1.0, np.abs(a))))


def split_spectrum(lam_all, X_all, removed):
    """Remove the eigenvalues closest to ``removed`` (one each, optimal matching).

    Returns ``(lam_rest, X_rest)``, the complementary ("fixed") eigen-data.
    """
    removed = np.asarray(removed, dtype=complex)
    cost = np.abs(removed[:, None] - np.asarray(lam_all)[None, :])
    _, cols = linear_sum_assignment(cost)
    keep = np.setdiff1d(np.arange(len(lam_all)), cols)
    return np.asarray(lam_all)[keep], X_all[:, keep]
