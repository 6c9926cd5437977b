"""Dense matrix helpers and the domain types shared by every solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import scipy.linalg as sla

from .errors import DimensionMismatch, SingularSystem, SpectraOverlap

RCOND_MIN = 1e-12


class Star(str, Enum):
    T = "T"     # transpose
    CT = "CT"   # conjugate transpose


class Field(str, Enum):
    REAL = "real"
    COMPLEX = "complex"


_NAMES = {
    (Star.T, 1, 1): "symmetric",
    (Star.CT, 1, 1): "Hermitian",
    (Star.T, -1, 1): "T-odd",
    (Star.CT, -1, 1): "*-odd",
    (Star.T, 1, -1): "T-even",
    (Star.CT, 1, -1): "*-even",
    # not in the usual table; Q is then (skew-)symmetric up to a unit factor
    (Star.T, -1, -1): "T-skew",
    (Star.CT, -1, -1): "*-skew",
}

_ALIASES = {
    "symmetric": (Star.T, 1, 1),
    "sym": (Star.T, 1, 1),
    "hermitian": (Star.CT, 1, 1),
    "herm": (Star.CT, 1, 1),
    "t-odd": (Star.T, -1, 1),
    "*-odd": (Star.CT, -1, 1),
    "ct-odd": (Star.CT, -1, 1),
    "star-odd": (Star.CT, -1, 1),
    "t-even": (Star.T, 1, -1),
    "gyroscopic": (Star.T, 1, -1),
    "*-even": (Star.CT, 1, -1),
    "ct-even": (Star.CT, 1, -1),
    "star-even": (Star.CT, 1, -1),
    "t-skew": (Star.T, -1, -1),
    "*-skew": (Star.CT, -1, -1),
    "ct-skew": (Star.CT, -1, -1),
}


@dataclass(frozen=True)
class StructureClass:
    """The ``(star, eps1, eps2)`` symmetry ``M* = eps1 M, D* = eps2 D, K* = eps1 K``."""

    star: Star
    eps1: int
    eps2: int
    field: Field = Field.REAL

    def __post_init__(self):
        object.__setattr__(self, "star", Star(self.star))
        object.__setattr__(self, "field", Field(self.field))
        if self.eps1 not in (1, -1) or self.eps2 not in (1, -1):
            raise ValueError("eps1 and eps2 must be +1 or -1")
        if self.star is Star.CT and self.field is Field.REAL:
            # on real data the conjugate transpose is the transpose
            object.__setattr__(self, "star", Star.T)

    @classmethod
    def from_name(cls, name: str, field: Field | str = Field.REAL) -> "StructureClass":
        key = name.strip().lower()
        if key not in _ALIASES:
            raise ValueError(f"unknown structure class {name!r}")
        star, e1, e2 = _ALIASES[key]
        fld = Field(field)
        if star is Star.CT:
            fld = Field.COMPLEX
        return cls(star, e1, e2, fld)

    @property
    def name(self) -> str:
        return _NAMES[(self.star, self.eps1, self.eps2)]

    @property
    def eps(self) -> int:
        """eps1 * eps2, the sign in the eigenvalue pairing."""
        return self.eps1 * self.eps2

    @property
    def is_real(self) -> bool:
        return self.field is Field.REAL

    def star_apply(self, lam):
        return np.conj(lam) if self.star is Star.CT else lam

    def adjoint(self, A):
        return star_adjoint(A, self.star)

    def partner(self, lam):
        """Image of ``lam`` under the eigenvalue pairing ``lam -> eps1 eps2 lam*``."""
        return self.eps * self.star_apply(lam)

    def __str__(self):
        star = "*" if self.star is Star.CT else "T"
        return f"{self.name} ({star},{self.eps1:+d},{self.eps2:+d}) over {self.field.value}"


def star_adjoint(A, star: Star | str):
    """Transpose (``T``) or conjugate transpose (``CT``) of ``A``."""
    A = np.asarray(A)
    if Star(star) is Star.CT:
        return A.conj().T
    return A.T


def fro(A) -> float:
    return float(np.linalg.norm(A, "fro")) if np.size(A) else 0.0


def rcond(A) -> float:
    """Reciprocal 1-norm condition number (0 for singular, 1 for the empty matrix)."""
    A = np.asarray(A)
    if A.size == 0:
        return 1.0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0:
        return 0.0
    return float(s[-1] / s[0])


def checked_inv(A, what="matrix", exc=SingularSystem, rcond_min=RCOND_MIN):
    """Inverse of ``A``; raises ``exc`` when ``rcond(A) < rcond_min``."""
    rc = rcond(A)
    if rc < rcond_min:
        raise exc(f"{what} is numerically singular (rcond={rc:.3e})")
    return np.linalg.inv(A)


def as_matrix(A, name="matrix") -> np.ndarray:
    A = np.asarray(A)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2:
        raise DimensionMismatch(f"{name} must be two-dimensional, got shape {A.shape}")
    if np.iscomplexobj(A):
        return A.astype(complex)
    return A.astype(float)


def _frozen(A):
    A = np.array(A, copy=True)
    A.setflags(write=False)
    return A


@dataclass(frozen=True)
class QuadPoly:
    """``Q(lam) = lam^2 M + lam D + K`` with dense square coefficients."""

    M: np.ndarray
    D: np.ndarray
    K: np.ndarray

    def __post_init__(self):
        mats = [as_matrix(A, nm) for A, nm in zip((self.M, self.D, self.K), "MDK")]
        n = mats[0].shape[0]
        for A, nm in zip(mats, "MDK"):
            if A.shape != (n, n):
                raise DimensionMismatch(f"{nm} has shape {A.shape}, expected ({n}, {n})")
        dtype = complex if any(np.iscomplexobj(A) for A in mats) else float
        for A, nm in zip(mats, "MDK"):
            object.__setattr__(self, nm, _frozen(A.astype(dtype)))

    @property
    def n(self) -> int:
        return self.M.shape[0]

    @property
    def field(self) -> Field:
        return Field.COMPLEX if np.iscomplexobj(self.M) else Field.REAL

    def __call__(self, lam):
        return lam * lam * self.M + lam * self.D + self.K

    def is_regular(self, rcond_min: float = RCOND_MIN) -> bool:
        """Regularity certified by a nonsingular leading coefficient."""
        return rcond(self.M) >= rcond_min

    def perturbed(self, delta: "PerturbationTriple") -> "QuadPoly":
        return QuadPoly(self.M + delta.dM, self.D + delta.dD, self.K + delta.dK)

    def astype(self, dtype) -> "QuadPoly":
        return QuadPoly(self.M.astype(dtype), self.D.astype(dtype), self.K.astype(dtype))


@dataclass(frozen=True)
class MatrixPair:
    """Candidate invariant pair ``(X, Lam)`` with ``X`` n-by-p and ``Lam`` p-by-p."""

    X: np.ndarray
    Lam: np.ndarray

    def __post_init__(self):
        X = as_matrix(self.X, "X")
        L = as_matrix(self.Lam, "Lam")
        p = X.shape[1]
        if L.shape != (p, p):
            raise DimensionMismatch(f"Lam has shape {L.shape}, expected ({p}, {p})")
        if p > 2 * X.shape[0]:
            raise DimensionMismatch(f"p={p} exceeds 2n={2 * X.shape[0]}")
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "Lam", _frozen(L))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def __iter__(self):
        return iter((self.X, self.Lam))


@dataclass(frozen=True)
class PerturbationTriple:
    dM: np.ndarray
    dD: np.ndarray
    dK: np.ndarray
    method: str = ""
    params: dict[str, Any] = field(default_factory=dict)
    structure_preserved: bool | None = None
    psd: tuple[bool, bool] | None = None

    def __post_init__(self):
        mats = [as_matrix(A, nm) for A, nm in zip((self.dM, self.dD, self.dK), ("dM", "dD", "dK"))]
        n = mats[0].shape[0]
        if any(A.shape != (n, n) for A in mats):
            raise DimensionMismatch("perturbation blocks must be square and conformal")
        for A, nm in zip(mats, ("dM", "dD", "dK")):
            object.__setattr__(self, nm, _frozen(A))

    @property
    def n(self) -> int:
        return self.dM.shape[0]

    def norms(self) -> tuple[float, float, float]:
        return fro(self.dM), fro(self.dD), fro(self.dK)

    def check_conformal(self, Q: QuadPoly):
        if self.n != Q.n:
            raise DimensionMismatch(f"perturbation is {self.n}x{self.n}, polynomial is {Q.n}x{Q.n}")

    def __iter__(self):
        return iter((self.dM, self.dD, self.dK))


def small_sylvester_solve(A, B, C, tol: float = 1e-10):
    """Solve ``T A - B T = C`` through the Kronecker system.

    Meant for the small (p up to a few dozen) coefficient sizes that appear in
    the embedding formulas. Column-major vectorisation gives
    ``(A^T kron I - I kron B) vec(T) = vec(C)``.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    C = as_matrix(C, "C")
    p, q = B.shape[0], A.shape[0]
    if A.shape != (q, q) or B.shape != (p, p) or C.shape != (p, q):
        raise DimensionMismatch("small_sylvester_solve: need A q-by-q, B p-by-p, C p-by-q")
    ea = np.linalg.eigvals(A)
    eb = np.linalg.eigvals(B)
    scale = max(1.0, np.abs(ea).max(initial=0.0), np.abs(eb).max(initial=0.0))
    gap = np.abs(ea[:, None] - eb[None, :]).min() if ea.size and eb.size else np.inf
    if gap < tol * scale:
        raise SpectraOverlap(f"spectra of A and B overlap (min gap {gap:.3e})")
    kron = np.kron(A.T, np.eye(p)) - np.kron(np.eye(q), B)
    if rcond(kron) < RCOND_MIN:
        raise SingularSystem("Kronecker Sylvester matrix is numerically singular")
    vec = np.linalg.solve(kron, C.reshape(-1, order="F"))
    return vec.reshape((p, q), order="F")


def block_diag(*blocks):
    return sla.block_diag(*blocks) if blocks else np.zeros((0, 0))
