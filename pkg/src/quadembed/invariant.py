"""Invariant pairs: evaluation, certification, realification and coupling matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .core import MatrixPair, QuadPoly, StructureClass, fro
from .errors import (DegenerateInput, DimensionMismatch, RealEigenvalue,
                     SelfPaired)

RANK_TOL = 1e-10


def _check_pair(Q: QuadPoly, X, Lam):
    if X.shape[0] != Q.n:
        raise DimensionMismatch(f"X has {X.shape[0]} rows, polynomial has order {Q.n}")
    if Lam.shape != (X.shape[1], X.shape[1]):
        raise DimensionMismatch(f"Lam has shape {Lam.shape}, X has {X.shape[1]} columns")


def _unpack(P, Lam=None):
    if Lam is None:
        X, Lam = P
    else:
        X = P
    return np.atleast_2d(np.asarray(X)), np.atleast_2d(np.asarray(Lam))


def evaluate_pair(Q: QuadPoly, X, Lam=None):
    """``M X Lam^2 + D X Lam + K X``.

    Accepts either a ``MatrixPair`` (or any ``(X, Lam)`` tuple) or ``X`` and
    ``Lam`` as separate arguments.
    """
    X, Lam = _unpack(X, Lam)
    _check_pair(Q, X, Lam)
    XL = X @ Lam
    return Q.M @ XL @ Lam + Q.D @ XL + Q.K @ X


def relative_residual(Q: QuadPoly, X, Lam=None) -> float:
    """``|Q(X, Lam)|_F / (|M X Lam^2|_F + |D X Lam|_F + |K X|_F)``.

    Raises ``DegenerateInput`` when the denominator vanishes (e.g. ``X = 0``).
    """
    X, Lam = _unpack(X, Lam)
    _check_pair(Q, X, Lam)
    XL = X @ Lam
    a, b, c = Q.M @ XL @ Lam, Q.D @ XL, Q.K @ X
    den = fro(a) + fro(b) + fro(c)
    if den == 0.0:
        raise DegenerateInput("relative residual undefined: all three terms vanish")
    return fro(a + b + c) / den


def is_invariant_pair(Q: QuadPoly, X, Lam=None, tol: float = 1e-10):
    """Return ``(ok, ratio)`` where ``ratio`` is :func:`relative_residual`."""
    rr = relative_residual(Q, X, Lam)
    return rr <= tol, rr


def numerical_rank(A, tol: float = RANK_TOL) -> int:
    """Rank from the diagonal of a column-pivoted QR."""
    A = np.asarray(A)
    if A.size == 0:
        return 0
    R = sla.qr(A, mode="r", pivoting=True)[0]
    d = np.abs(np.diag(R))
    if d.size == 0 or d[0] == 0:
        return 0
    return int(np.sum(d > tol * d[0]))


def minimality_index(X, Lam, m_max: int = 2):
    """Smallest ``m <= m_max`` with ``[X Lam^{m-1}; ...; X Lam; X]`` of full column rank.

    Returns None when no such ``m`` exists.
    """
    X = np.atleast_2d(np.asarray(X))
    Lam = np.atleast_2d(np.asarray(Lam))
    p = X.shape[1]
    blocks = [X]
    for m in range(1, m_max + 1):
        if m > 1:
            blocks.insert(0, blocks[0] @ Lam)
        if numerical_rank(np.vstack(blocks)) == p:
            return m
    return None


def realify_pair(lam0, x0) -> MatrixPair:
    """Real invariant pair ``([re x, im x], [[re l, im l], [-im l, re l]])`` of a complex eigenpair."""
    lam0 = complex(lam0)
    if lam0.imag == 0.0:
        raise RealEigenvalue("realification needs a non-real eigenvalue")
    x0 = np.asarray(x0, dtype=complex).reshape(-1)
    return MatrixPair(np.column_stack([x0.real, x0.imag]), rotation_block(lam0))


def rotation_block(lam):
    lam = complex(lam)
    return np.array([[lam.real, lam.imag], [-lam.imag, lam.real]])


@dataclass(frozen=True)
class CouplingMatrix:
    """``S_jk = X_j* M X_k Lam_k + eps1 eps2 Lam_j* X_j* M X_k + X_j* D X_k``."""

    S: np.ndarray
    cls: StructureClass
    indices: tuple[int, int] = (0, 0)

    def sylvester_residual(self, Lam_j, Lam_k) -> float:
        """Relative residual of ``S Lam_k = eps1 eps2 Lam_j* S``."""
        lhs = self.S @ Lam_k
        rhs = self.cls.eps * self.cls.adjoint(Lam_j) @ self.S
        scale = fro(lhs) + fro(rhs)
        return fro(lhs - rhs) / scale if scale else 0.0

    def self_coupling_residuals(self, Lam):
        """Relative deviations from ``S* = eps2 S`` and ``S Lam = eps1 (S Lam)*``."""
        S, c = self.S, self.cls
        nS = fro(S) or 1.0
        SL = S @ Lam
        nSL = fro(SL) or 1.0
        return (fro(c.adjoint(S) - c.eps2 * S) / nS,
                fro(SL - c.eps1 * c.adjoint(SL)) / nSL)


def coupling_matrix(Q: QuadPoly, cls: StructureClass, pair_j, pair_k, indices=(0, 1)) -> CouplingMatrix:
    Xj, Lj = _unpack(pair_j)
    Xk, Lk = _unpack(pair_k)
    _check_pair(Q, Xj, Lj)
    _check_pair(Q, Xk, Lk)
    adj = cls.adjoint
    XjM = adj(Xj) @ Q.M
    S = XjM @ Xk @ Lk + cls.eps * adj(Lj) @ XjM @ Xk + adj(Xj) @ Q.D @ Xk
    return CouplingMatrix(S, cls, tuple(indices))


def pairing_partner(lam, cls: StructureClass):
    return cls.partner(lam)


def is_self_paired(lam, cls: StructureClass, tol: float = 1e-8) -> bool:
    return abs(cls.partner(lam) - lam) <= tol * max(1.0, abs(lam))


def block_anti_diagonal_s0(Q: QuadPoly, cls: StructureClass, lam0, x0, x0_partner, tol: float = 1e-8):
    """Coupling scalar of an eigenpair and its pairing partner.

    With ``X0 = [x0, x0~]`` and ``Lam0 = diag(lam0, eps1 eps2 lam0*)`` the
    coupling matrix of ``(X0, Lam0)`` is ``[[0, s0], [eps2 s0*, 0]]`` where
    ``s0 = 2 eps1 eps2 lam0* x0* M x0~ + x0* D x0~``.

    Returns ``(s0, S)``.
    """
    if is_self_paired(lam0, cls, tol):
        raise SelfPaired(f"{lam0} is its own pairing partner under {cls.name}")
    x0 = np.asarray(x0).reshape(-1)
    xt = np.asarray(x0_partner).reshape(-1)
    xs = cls.star_apply(x0)
    s0 = 2 * cls.eps * cls.star_apply(lam0) * (xs @ Q.M @ xt) + xs @ Q.D @ xt
    S = np.array([[0, s0], [cls.eps2 * cls.star_apply(s0), 0]])
    return s0, S


def structure_deviations(Q: QuadPoly, cls: StructureClass):
    """Relative deviations ``|M - eps1 M*|/|M|``, ``|D - eps2 D*|/|D|``, ``|K - eps1 K*|/|K|``.

    A zero coefficient has deviation 0.
    """
    out = []
    for A, e in ((Q.M, cls.eps1), (Q.D, cls.eps2), (Q.K, cls.eps1)):
        nA = fro(A)
        out.append(fro(A - e * cls.adjoint(A)) / nA if nA else 0.0)
    return tuple(out)


def structure_check(Q: QuadPoly, cls: StructureClass, tol: float = 1e-9) -> bool:
    if cls.is_real and any(np.any(np.imag(A) != 0) for A in (Q.M, Q.D, Q.K)):
        return False
    return all(d <= tol for d in structure_deviations(Q, cls))
