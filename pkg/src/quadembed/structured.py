"""Structure-preserving updates for (star, eps1, eps2)-structured polynomials.

The no-spillover updates only need the pair being changed. Every other
invariant pair ``(Xf, Lf)`` of ``Q`` survives provided the paired spectra are
disjoint, ``sigma(Lc)`` and ``sigma(eps1 eps2 Lf*)`` have no common point.
That hypothesis involves the unknown ``Lf`` and cannot be checked here; it is
recorded in ``PerturbationTriple.params`` as a caller assertion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .core import (PerturbationTriple, QuadPoly, Star, StructureClass, as_matrix,
                   checked_inv, fro, rcond, small_sylvester_solve, star_adjoint)
from .errors import (BadFreeBlock, DimensionMismatch, IsotropicBreakdown,
                     NearSingularGram, RankDeficient, SingularP, SingularR,
                     SingularSolution)
from .invariant import coupling_matrix
from .unstructured import INVARIANCE_TOL, _require_invariant

ISOTROPY_TOL = 1e-12
RANK_TOL = 1e-10
R_RCOND_MIN = 1e-12
STRUCTURE_TOL = 1e-8

_DISJOINTNESS = "caller asserts sigma(Lc) and sigma(eps1 eps2 Lf*) are disjoint"


@dataclass(frozen=True)
class StarQR:
    """``X = Q[:, :p] R`` with ``Q* Q = Q Q* = I`` for the chosen star."""

    Q: np.ndarray
    R: np.ndarray
    star: Star
    breakdown: bool = False

    @property
    def Q1(self):
        return self.Q[:, :self.R.shape[0]]

    @property
    def Q2(self):
        return self.Q[:, self.R.shape[0]:]

    def orthogonality_error(self) -> float:
        return fro(star_adjoint(self.Q, self.star) @ self.Q - np.eye(self.Q.shape[0]))


def _bilinear_project(v, basis):
    # two passes of modified Gram-Schmidt under <x, y> = x^T y
    for _ in range(2):
        for q in basis:
            v = v - (q @ v) * q
    return v


def _bilinear_normalize(v, what):
    nrm2 = np.vdot(v, v).real
    s = v @ v
    if nrm2 == 0.0 or abs(s) < ISOTROPY_TOL * nrm2:
        raise IsotropicBreakdown(f"{what} is (nearly) isotropic: |x^T x| = {abs(s):.2e}")
    return v / np.sqrt(s)


def _complex_orthogonal_qr(X, rng):
    n, p = X.shape
    basis = []
    R = np.zeros((p, p), dtype=complex)
    for j in range(p):
        v = X[:, j].astype(complex)
        for i, q in enumerate(basis):
            c = q @ v
            R[i, j] += c
            v = v - c * q
        # reorthogonalisation pass, accumulating the corrections into R
        for i, q in enumerate(basis):
            c = q @ v
            R[i, j] += c
            v = v - c * q
        if np.linalg.norm(v) <= RANK_TOL * max(1.0, np.linalg.norm(X[:, j])):
            raise RankDeficient(f"column {j} of X is linearly dependent on the previous ones")
        s = v @ v
        if abs(s) < ISOTROPY_TOL * np.vdot(v, v).real:
            raise IsotropicBreakdown(f"column {j}: |x^T x| = {abs(s):.2e} during bilinear Gram-Schmidt")
        R[j, j] = np.sqrt(s)
        basis.append(v / R[j, j])
    for _ in range(n - p):
        for _attempt in range(20):
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            v = _bilinear_project(v, basis)
            try:
                basis.append(_bilinear_normalize(v, "complement vector"))
                break
            except IsotropicBreakdown:
                continue
        else:
            raise IsotropicBreakdown("could not complete the complex-orthogonal basis")
    return np.column_stack(basis) if basis else np.zeros((n, 0), complex), R


def star_qr(X, star: Star | str = Star.T, seed: int = 0) -> StarQR:
    """Square ``Q`` with ``Q* Q = I`` and upper-triangular ``R`` with ``X = Q1 R``.

    Real data and ``CT`` use the Householder QR. Complex data with ``T`` uses
    Gram-Schmidt in the bilinear form ``x^T y``; the complement ``Q2`` is
    obtained from seeded random vectors. Accepted factorizations satisfy
    ``|Q* Q - I|_F <= 1e-9 n``.
    """
    X = as_matrix(X, "X")
    n, p = X.shape
    star = Star(star)
    if p > n:
        raise RankDeficient(f"X has more columns ({p}) than rows ({n})")
    if np.iscomplexobj(X) and star is Star.T:
        Q, R = _complex_orthogonal_qr(X, np.random.default_rng(seed))
    else:
        Q, R = sla.qr(X)
        R = R[:p]
        d = np.abs(np.diag(R))
        if p and d.min() <= RANK_TOL * max(d.max(), 1e-300):
            raise RankDeficient("X does not have full column rank")
    out = StarQR(Q, R, star)
    if out.orthogonality_error() > 1e-9 * max(n, 1):
        raise IsotropicBreakdown(f"star-orthogonal factor lost orthogonality "
                                 f"({out.orthogonality_error():.2e})")
    return out


def _inv_gram(Lam):
    """``((Lam^2)^* Lam^2 + Lam^* Lam + I)^{-1}``."""
    L2 = Lam @ Lam
    G = L2.conj().T @ L2 + Lam.conj().T @ Lam + np.eye(Lam.shape[0])
    return checked_inv(G, "(Lam^2)^* Lam^2 + Lam^* Lam + I", NearSingularGram)


def _free_blocks(cls, m, p, dtype, Z, blocks):
    Z1, Z2, Z3 = (np.zeros((m, p), dtype) if A is None else as_matrix(A) for A in Z)
    for A in (Z1, Z2, Z3):
        if A.shape != (m, p):
            raise DimensionMismatch(f"free parameter has shape {A.shape}, expected ({m}, {p})")
    out = []
    for A, e, nm in zip(blocks, (cls.eps1, cls.eps2, cls.eps1), ("M22", "D22", "K22")):
        A = np.zeros((m, m), dtype) if A is None else as_matrix(A)
        if A.shape != (m, m):
            raise DimensionMismatch(f"{nm} has shape {A.shape}, expected ({m}, {m})")
        if fro(A - e * cls.adjoint(A)) > 1e-12 * max(1.0, fro(A)):
            raise BadFreeBlock(f"{nm} does not satisfy {nm}* = {e:+d} {nm}")
        out.append(A)
    return (Z1, Z2, Z3), out


def _assemble(F, cls, eps, A11, A12, A22):
    """``F [[A11, eps A12*], [A12, A22]] F*``."""
    top = np.hstack([A11, eps * cls.adjoint(A12)])
    bottom = np.hstack([A12, A22])
    return F @ np.vstack([top, bottom]) @ cls.adjoint(F)


def _dtype(*arrays):
    return complex if any(np.iscomplexobj(a) for a in arrays) else float


def structured_family(X, Lam, cls: StructureClass, Z1=None, Z2=None, Z3=None,
                      M22=None, D22=None, K22=None, seed: int = 0) -> QuadPoly:
    """A structured polynomial having ``(X, Lam)`` as an invariant pair.

    With ``X = Q1 R`` from :func:`star_qr`, the coefficients are
    ``Q [[0, eps A12*], [A12, A22]] Q*`` where ``[M12 D12 K12]`` solve
    ``[M12 D12 K12] diag(R, R, R) [Lam^2; Lam; I] = 0`` with free parameters
    ``Z1, Z2, Z3`` ((n-p) x p) and structured ``A22`` blocks.
    """
    X = as_matrix(X, "X")
    Lam = as_matrix(Lam, "Lam")
    n, p = X.shape
    if Lam.shape != (p, p):
        raise DimensionMismatch(f"Lam has shape {Lam.shape}, expected ({p}, {p})")
    F = star_qr(X, cls.star, seed)
    m = n - p
    dtype = _dtype(X, Lam, F.Q, *(A for A in (Z1, Z2, Z3, M22, D22, K22) if A is not None))
    (Z1, Z2, Z3), (M22, D22, K22) = _free_blocks(cls, m, p, dtype, (Z1, Z2, Z3), (M22, D22, K22))
    S = _inv_gram(Lam)
    L2 = Lam @ Lam
    H = lambda A: A.conj().T  # noqa: E731
    Ip = np.eye(p)
    Rinv = checked_inv(F.R, "R factor", RankDeficient)
    M12 = (Z1 @ (Ip - L2 @ S @ H(L2)) - Z2 @ Lam @ S @ H(L2) - Z3 @ S @ H(L2)) @ Rinv
    D12 = (-Z1 @ L2 @ S @ H(Lam) + Z2 @ (Ip - Lam @ S @ H(Lam)) - Z3 @ S @ H(Lam)) @ Rinv
    K12 = (-Z1 @ L2 @ S - Z2 @ Lam @ S + Z3 @ (Ip - S)) @ Rinv
    zero = np.zeros((p, p), dtype)
    return QuadPoly(_assemble(F.Q, cls, cls.eps1, zero, M12, M22),
                    _assemble(F.Q, cls, cls.eps2, zero, D12, D22),
                    _assemble(F.Q, cls, cls.eps1, zero, K12, K22))


def structured_mup(Q: QuadPoly, cls: StructureClass, change, La, Z1=None, Z2=None, Z3=None,
                   M22=None, D22=None, K22=None, check_tol: float | None = INVARIANCE_TOL,
                   seed: int = 0) -> PerturbationTriple:
    """Structured update moving the invariant pair ``(Xc, Lc)`` to ``(Xc, La)``.

    The ``(1,1)`` blocks cancel ``Q1* A Q1``; the off-diagonal blocks are
    ``[Z1 - W S (La^2)^*] R^{-1}``, ``[Z2 - W S La^*] R^{-1}``, ``[Z3 - W S] R^{-1}``
    with ``W = Q2* M Xc (La^2 - Lc^2) + Q2* D Xc (La - Lc) + Z1 La^2 + Z2 La + Z3``.
    The rest of the spectrum is not controlled.
    """
    Xc, Lc = (as_matrix(A) for A in change)
    La = as_matrix(La, "La")
    if La.shape != Lc.shape:
        raise DimensionMismatch("La and Lc must have the same shape")
    _require_invariant(Q, Xc, Lc, check_tol, "(Xc, Lc)")
    n, p = Xc.shape
    F = star_qr(Xc, cls.star, seed)
    m = n - p
    dtype = _dtype(Q.M, Xc, Lc, La, F.Q, *(A for A in (Z1, Z2, Z3, M22, D22, K22) if A is not None))
    (Z1, Z2, Z3), (M22, D22, K22) = _free_blocks(cls, m, p, dtype, (Z1, Z2, Z3), (M22, D22, K22))
    S = _inv_gram(La)
    H = lambda A: A.conj().T  # noqa: E731
    La2 = La @ La
    Q1s, Q2s = cls.adjoint(F.Q1), cls.adjoint(F.Q2)
    W = (Q2s @ Q.M @ Xc @ (La2 - Lc @ Lc) + Q2s @ Q.D @ Xc @ (La - Lc)
         + Z1 @ La2 + Z2 @ La + Z3)
    Rinv = checked_inv(F.R, "R factor", RankDeficient)
    WS = W @ S
    M12 = (Z1 - WS @ H(La2)) @ Rinv
    D12 = (Z2 - WS @ H(La)) @ Rinv
    K12 = (Z3 - WS) @ Rinv
    dM = _assemble(F.Q, cls, cls.eps1, -Q1s @ Q.M @ F.Q1, M12, M22)
    dD = _assemble(F.Q, cls, cls.eps2, -Q1s @ Q.D @ F.Q1, D12, D22)
    dK = _assemble(F.Q, cls, cls.eps1, -Q1s @ Q.K @ F.Q1, K12, K22)
    return PerturbationTriple(dM, dD, dK, method="structured-mup", structure_preserved=True)


def _r_matrix(Q, cls, Xc, Lc, Theta):
    M1 = cls.adjoint(Xc) @ Q.M @ Xc
    return M1 @ Theta + cls.eps * cls.adjoint(Lc) @ M1 + cls.adjoint(Xc) @ Q.D @ Xc


def _no_spillover_core(Q, cls, Xc, Lc, Theta, check_tol, tol):
    _require_invariant(Q, Xc, Lc, check_tol, "(Xc, Lc)")
    R = _r_matrix(Q, cls, Xc, Lc, Theta)
    rc = rcond(R)
    if rc < R_RCOND_MIN:
        raise SingularR()
    Z = (Lc - Theta) @ np.linalg.inv(R)
    e = cls.eps
    Ls = cls.adjoint(Lc)
    MX, DX = Q.M @ Xc, Q.D @ Xc
    MXL = MX @ Lc
    XsM, XsD = cls.adjoint(Xc) @ Q.M, cls.adjoint(Xc) @ Q.D
    dM = MX @ Z @ XsM
    dD = e * MX @ Z @ Ls @ XsM + MX @ Z @ XsD + MXL @ Z @ XsM + DX @ Z @ XsM
    dK = e * MXL @ Z @ Ls @ XsM + MXL @ Z @ XsD + e * DX @ Z @ Ls @ XsM + DX @ Z @ XsD
    S = coupling_matrix(Q, cls, (Xc, Lc), (Xc, Lc)).S
    ST = S @ Theta
    scale = fro(ST)
    structure_ok = bool(fro(ST - cls.eps1 * cls.adjoint(ST)) <= tol * max(scale, 1e-300)) if scale else True
    params = {"hypothesis": _DISJOINTNESS, "rcond_R": rc}
    return dM, dD, dK, Z, structure_ok, params


def structured_no_spillover(Q: QuadPoly, cls: StructureClass, change, La,
                            check_tol: float | None = INVARIANCE_TOL, tol: float = STRUCTURE_TOL):
    """Replace ``(Xc, Lc)`` by ``(Xc, La)`` keeping every spectrally disjoint pair.

    ``Z = (Lc - La) R^{-1}`` with ``R = Xc* M Xc La + eps1 eps2 Lc* Xc* M Xc + Xc* D Xc``.
    The update is structured when ``S La = eps1 (S La)*`` for the coupling
    matrix ``S`` of ``(Xc, Lc)``; this is reported as ``structure_ok``.

    Returns ``(delta, Z, structure_ok)``.
    """
    Xc, Lc = (as_matrix(A) for A in change)
    La = as_matrix(La, "La")
    if La.shape != Lc.shape:
        raise DimensionMismatch("La and Lc must have the same shape")
    dM, dD, dK, Z, ok, params = _no_spillover_core(Q, cls, Xc, Lc, La, check_tol, tol)
    return PerturbationTriple(dM, dD, dK, method="p-identity", params=params, structure_preserved=ok), Z, ok


def structured_no_spillover_with_P(Q: QuadPoly, cls: StructureClass, change, La, P,
                                   check_tol: float | None = INVARIANCE_TOL,
                                   tol: float = STRUCTURE_TOL):
    """As :func:`structured_no_spillover`, embedding ``(Xc P, La)`` instead of ``(Xc, La)``.

    ``La`` is replaced by ``Theta = P La P^{-1}`` inside ``Z`` and ``R``;
    ``structure_ok`` tests ``S Theta = eps1 (S Theta)*``.
    """
    Xc, Lc = (as_matrix(A) for A in change)
    La = as_matrix(La, "La")
    P = as_matrix(P, "P")
    p = La.shape[0]
    if La.shape != Lc.shape or P.shape != (p, p):
        raise DimensionMismatch("La, Lc and P must all be p x p")
    if np.array_equal(P, np.eye(p)):
        Theta = La
    else:
        Theta = P @ La @ checked_inv(P, "P", SingularP)
    dM, dD, dK, Z, ok, params = _no_spillover_core(Q, cls, Xc, Lc, Theta, check_tol, tol)
    params["P"] = P
    return PerturbationTriple(dM, dD, dK, method="p-constructed", params=params, structure_preserved=ok), Z, ok


def find_nonsingular_P(Q: QuadPoly, cls: StructureClass, change, La, S_target=None):
    """``P`` with ``R1 P + (Xc* M Xc) P La = S_target``, so that ``R = S_target P^{-1}``.

    ``R1 = eps1 eps2 Lc* (Xc* M Xc) + Xc* D Xc``. The default target is the identity.
    """
    Xc, Lc = (as_matrix(A) for A in change)
    La = as_matrix(La, "La")
    p = La.shape[0]
    S_target = np.eye(p) if S_target is None else as_matrix(S_target, "S_target")
    M1 = cls.adjoint(Xc) @ Q.M @ Xc
    M1inv = checked_inv(M1, "Xc* M Xc")
    R1 = cls.eps * cls.adjoint(Lc) @ M1 + cls.adjoint(Xc) @ Q.D @ Xc
    P = small_sylvester_solve(La, -M1inv @ R1, M1inv @ S_target)
    if rcond(P) < R_RCOND_MIN:
        raise SingularSolution("Sylvester solution P is numerically singular; "
                               "retry with a different S_target")
    return P
