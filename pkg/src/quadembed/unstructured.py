"""Unstructured updates: polynomial families with a prescribed invariant pair,
model updating, and no-spillover updating when the fixed pair is known.

All three rest on the same fact: ``[M D K] Xt = B`` with the stacked
``Xt = [X Lam^2; X Lam; X]`` of full column rank has the general solution
``B Xt^+ + Z (I - Xt Xt^+)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .core import PerturbationTriple, QuadPoly, as_matrix, rcond
from .errors import DimensionMismatch, NearSingularGram, NotInvariantPair, NotMinimal
from .invariant import evaluate_pair, minimality_index, relative_residual

INVARIANCE_TOL = 1e-6


@dataclass(frozen=True)
class FreeParamsZ:
    """Free parameters ``Z1, Z2, Z3`` of a solution family; ``None`` means zero."""

    Z1: np.ndarray | None = None
    Z2: np.ndarray | None = None
    Z3: np.ndarray | None = None

    def resolve(self, rows: int, cols: int, dtype=float):
        out = []
        for Z in (self.Z1, self.Z2, self.Z3):
            if Z is None:
                out.append(np.zeros((rows, cols), dtype=dtype))
                continue
            Z = as_matrix(Z)
            if Z.shape != (rows, cols):
                raise DimensionMismatch(f"free parameter has shape {Z.shape}, expected ({rows}, {cols})")
            out.append(Z)
        return out

    def given(self):
        return [Z for Z in (self.Z1, self.Z2, self.Z3) if Z is not None]

    @classmethod
    def random(cls, rows, cols, rng, complex_=False, scale=1.0):
        def draw():
            Z = rng.standard_normal((rows, cols))
            if complex_:
                Z = Z + 1j * rng.standard_normal((rows, cols))
            return scale * Z
        return cls(draw(), draw(), draw())


def stacked(X, Lam):
    """``[X Lam^2; X Lam; X]``."""
    XL = X @ Lam
    return np.vstack([XL @ Lam, XL, X])


def gram_inverse(Xt, rcond_min: float = 1e-10):
    """``(Xt^* Xt)^{-1}`` from a thin QR of ``Xt`` (the Gram matrix is never formed).

    ``rcond_min`` applies to the triangular factor, i.e. to the square root of
    the Gram matrix condition number.
    """
    R = sla.qr(Xt, mode="economic")[1]
    rc = rcond(R)
    if rc < rcond_min:
        raise NearSingularGram(f"stacked pair matrix is nearly rank deficient (rcond={rc:.2e})")
    Rinv = sla.solve_triangular(R, np.eye(R.shape[0], dtype=R.dtype))
    return Rinv @ Rinv.conj().T


def _require_minimal(X, Lam, what="pair"):
    if minimality_index(X, Lam) is None:
        raise NotMinimal(f"{what} is not minimal (stacked matrix is rank deficient)")


def _require_invariant(Q, X, Lam, tol, what):
    if tol is None:
        return
    rr = relative_residual(Q, X, Lam)
    if rr > tol:
        raise NotInvariantPair(f"{what} is not an invariant pair (relative residual {rr:.2e})")


def _dtype(*arrays):
    return complex if any(np.iscomplexobj(a) for a in arrays) else float


def family_with_pair(X, Lam, Z: FreeParamsZ | None = None) -> QuadPoly:
    """Polynomial from the family having ``(X, Lam)`` as an invariant pair.

    ``M, D, K`` are the three block columns of ``Z (I - Xt Q_X Xt^*)`` with
    ``Q_X = (Xt^* Xt)^{-1}``. ``Z = 0`` gives the zero polynomial.
    """
    X = as_matrix(X, "X")
    Lam = as_matrix(Lam, "Lam")
    n = X.shape[0]
    _require_minimal(X, Lam)
    Z = Z or FreeParamsZ()
    Z1, Z2, Z3 = Z.resolve(n, n, _dtype(X, Lam, *Z.given()))
    QX = gram_inverse(stacked(X, Lam))
    XL2 = X @ Lam @ Lam
    XL = X @ Lam
    H = lambda A: A.conj().T  # noqa: E731
    I = np.eye(n)
    M = Z1 @ (I - XL2 @ QX @ H(XL2)) - Z2 @ XL @ QX @ H(XL2) - Z3 @ X @ QX @ H(XL2)
    D = -Z1 @ XL2 @ QX @ H(XL) + Z2 @ (I - XL @ QX @ H(XL)) - Z3 @ X @ QX @ H(XL)
    K = -Z1 @ XL2 @ QX @ H(X) - Z2 @ XL @ QX @ H(X) + Z3 @ (I - X @ QX @ H(X))
    return QuadPoly(M, D, K)


def mup_update(Q: QuadPoly, Xc, Lc, La, Z: FreeParamsZ | None = None,
               check_tol: float | None = INVARIANCE_TOL) -> PerturbationTriple:
    """Model update turning the invariant pair ``(Xc, Lc)`` into ``(Xc, La)``.

    ``dM = Z1 - W R (La^2)^* Xc^*``, ``dD = Z2 - W R La^* Xc^*``,
    ``dK = Z3 - W R Xc^*`` with
    ``W = M Xc (La^2 - Lc^2) + D Xc (La - Lc) + Z1 Xc La^2 + Z2 Xc La + Z3 Xc`` and
    ``R`` the inverse Gram matrix of ``[Xc La^2; Xc La; Xc]``.
    Nothing is said about the rest of the spectrum.
    """
    Xc, Lc, La = (as_matrix(A) for A in (Xc, Lc, La))
    if La.shape != Lc.shape:
        raise DimensionMismatch("La and Lc must have the same shape")
    _require_invariant(Q, Xc, Lc, check_tol, "(Xc, Lc)")
    _require_minimal(Xc, La, "(Xc, La)")
    n = Q.n
    Z = Z or FreeParamsZ()
    Z1, Z2, Z3 = Z.resolve(n, n, _dtype(Q.M, Xc, Lc, La, *Z.given()))
    La2 = La @ La
    W = (Q.M @ Xc @ (La2 - Lc @ Lc) + Q.D @ Xc @ (La - Lc)
         + Z1 @ Xc @ La2 + Z2 @ Xc @ La + Z3 @ Xc)
    R = gram_inverse(stacked(Xc, La))
    WR = W @ R
    H = lambda A: A.conj().T  # noqa: E731
    dM = Z1 - WR @ H(La2) @ H(Xc)
    dD = Z2 - WR @ H(La) @ H(Xc)
    dK = Z3 - WR @ H(Xc)
    return PerturbationTriple(dM, dD, dK, method="mup",
                              params={"Z": "given" if Z.given() else "zero"},
                              structure_preserved=None)


def no_spillover_update_known_fixed(Q: QuadPoly, change, fixed, aimed,
                                    Z: FreeParamsZ | None = None,
                                    check_tol: float | None = INVARIANCE_TOL) -> PerturbationTriple:
    """Replace ``change = (Xc, Lc)`` by ``aimed = (Xa, La)`` while keeping ``fixed = (Xf, Lf)``.

    Needs the fixed pair explicitly; the perturbation is unstructured. With
    ``[[U, V], [V^*, W]]`` the inverse Gram matrix of the stacked
    ``[X Lam^2; X Lam; X]`` for ``X = [Xa Xf]``, ``Lam = diag(La, Lf)``:

    ``F_M = (Q(Xa, La) + Z Xta)(U (Xa La^2)^* + V (Xf Lf^2)^*) + Z Xtf (V^* (Xa La^2)^* + W (Xf Lf^2)^*)``

    and likewise for ``F_D`` (first powers) and ``F_K`` (zeroth powers);
    ``dM = Z1 - F_M`` etc.
    """
    Xc, Lc = (as_matrix(A) for A in change)
    Xf, Lf = (as_matrix(A) for A in fixed)
    Xa, La = (as_matrix(A) for A in aimed)
    if Xa.shape != Xc.shape or La.shape != Lc.shape:
        raise DimensionMismatch("aimed pair must match the change pair in size")
    _require_invariant(Q, Xc, Lc, check_tol, "change pair")
    _require_invariant(Q, Xf, Lf, check_tol, "fixed pair")
    X = np.hstack([Xa, Xf])
    Lam = sla.block_diag(La, Lf)
    _require_minimal(X, Lam, "combined aimed/fixed pair")
    n = Q.n
    p1 = Xa.shape[1]
    Z = Z or FreeParamsZ()
    Z1, Z2, Z3 = Z.resolve(n, n, _dtype(Q.M, X, Lam, *Z.given()))
    Zcat = np.hstack([Z1, Z2, Z3])
    G = gram_inverse(stacked(X, Lam))
    U, V, W = G[:p1, :p1], G[:p1, p1:], G[p1:, p1:]
    Xta, Xtf = stacked(Xa, La), stacked(Xf, Lf)
    left_a = evaluate_pair(Q, Xa, La) + Zcat @ Xta
    left_f = Zcat @ Xtf
    H = lambda A: A.conj().T  # noqa: E731
    Vh = H(V)

    def F(Ya, Yf):
        return left_a @ (U @ H(Ya) + V @ H(Yf)) + left_f @ (Vh @ H(Ya) + W @ H(Yf))

    FM = F(Xa @ La @ La, Xf @ Lf @ Lf)
    FD = F(Xa @ La, Xf @ Lf)
    FK = F(Xa, Xf)
    return PerturbationTriple(Z1 - FM, Z2 - FD, Z3 - FK, method="known-fixed",
                              structure_preserved=None)
