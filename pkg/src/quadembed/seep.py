"""Structure-preserving eigenvalue embedding driven by eigen-data.

The pipeline is ``assemble_pair -> construct_P -> structured_no_spillover_with_P``.
``assemble_pair`` turns eigenvalues and eigenvectors into a (real when the
class is real) invariant pair with block-diagonal ``Lam``. ``construct_P``
picks the block-diagonal ``P`` that makes the update structured.

Group kinds
-----------
single   self-paired eigenvalue, one column, ``[[lam]]``
conj     realified complex eigenvalue of a real class, ``[re x, im x]`` with a rotation block
partner  ``[x, x~]`` with ``diag(lam, eps1 eps2 lam*)``
quad     real T-even/T-odd with ``lam`` off both axes: ``[re x, im x, re x~, im x~]``
         with ``diag(L, -L)``, ``L`` the rotation block of ``lam``
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (PerturbationTriple, QuadPoly, Star, StructureClass, block_diag,
                   checked_inv, fro, rcond)
from .errors import (DegenerateEigenvalues, DimensionMismatch, NoFeasibleParams, NotEigenpair,
                     NotGyroscopic, PairingViolation, ParamRetry, SelfPairedAimedMismatch,
                     SingularInnerMatrix, SingularK, SingularLambda, SingularP, SingularR,
                     StructureViolation, UnknownParameter, UnsupportedClass)
from .invariant import (is_self_paired, relative_residual, rotation_block,
                        structure_check, structure_deviations)
from .spectrum import (backward_error, eigenpair_near, max_relative_mismatch, quad_eig,
                       split_spectrum)
from .structured import structured_no_spillover, structured_no_spillover_with_P

log = logging.getLogger(__name__)

KIND_TOL = 1e-8
DISTINCT_TOL = 1e-8
P_RCOND_MIN = 1e-12
PARAM_NAMES = ("a", "b", "c", "r")


@dataclass
class EigenGroup:
    """One eigenvalue to be moved, with its pairing partner implied by the class.

    ``x_c`` and ``x_partner`` may be omitted; they are then computed from
    ``Q`` and ``lam_c`` is replaced by the accurate eigenvalue closest to it.
    ``a, b, c, r`` are the free parameters of this group's ``P`` block.
    """

    lam_c: complex
    lam_a: complex
    x_c: np.ndarray | None = None
    x_partner: np.ndarray | None = None
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    r: float = 1.0

    def params(self):
        return {k: getattr(self, k) for k in PARAM_NAMES}


@dataclass
class EmbedSpec:
    cls: StructureClass
    groups: list[EigenGroup]
    eig_tol: float = 1e-6

    def with_params(self, values: dict[str, float]) -> "EmbedSpec":
        """Copy with parameters set from names like ``a1``, ``c2`` (1-based group index)."""
        groups = list(self.groups)
        for key, val in values.items():
            name, idx = key[:1], key[1:]
            if name not in PARAM_NAMES or not idx.isdigit() or not 1 <= int(idx) <= len(groups):
                raise UnknownParameter(f"unknown free parameter {key!r}")
            j = int(idx) - 1
            groups[j] = replace(groups[j], **{name: float(val)})
        return replace(self, groups=groups)


@dataclass
class ResolvedGroup:
    kind: str
    lam: complex
    lam_a: complex
    x: np.ndarray
    x_partner: np.ndarray | None
    params: dict = field(default_factory=dict)

    @property
    def width(self) -> int:
        return {"single": 1, "conj": 2, "partner": 2, "quad": 4}[self.kind]

    @property
    def unchanged(self) -> bool:
        return self.lam_a == self.lam


def group_kind(lam, cls: StructureClass, tol: float = KIND_TOL) -> str:
    lam = complex(lam)
    scale = max(1.0, abs(lam))
    if cls.star is Star.CT or not cls.is_real:
        return "single" if is_self_paired(lam, cls, tol) else "partner"
    on_real = abs(lam.imag) <= tol * scale
    if cls.eps == 1:
        return "single" if on_real else "conj"
    on_imag = abs(lam.real) <= tol * scale
    if on_real and on_imag:
        return "single"
    if on_real:
        return "partner"
    if on_imag:
        return "conj"
    return "quad"


def _snap(lam, kind, cls):
    lam = complex(lam)
    if not cls.is_real:
        return lam
    if kind == "single" or (kind == "partner"):
        return complex(lam.real, 0.0)
    if kind == "conj" and cls.eps == -1:
        return complex(0.0, lam.imag)
    return lam


def _vector(v, real):
    v = np.asarray(v).reshape(-1)
    if real:
        if np.iscomplexobj(v) and np.abs(v.imag).max(initial=0) > 1e-8 * np.abs(v).max(initial=1):
            raise NotEigenpair("eigenvector of a real eigenvalue is not real up to scaling")
        return np.real(v).astype(float)
    return v.astype(complex)


def _resolve_vector(Q, lam, x, tol, spectrum):
    if x is None:
        lam, x = eigenpair_near(Q, lam, spectrum=spectrum())
        return lam, x
    x = np.asarray(x).reshape(-1)
    if x.shape[0] != Q.n:
        raise NotEigenpair(f"eigenvector has length {x.shape[0]}, expected {Q.n}")
    be = backward_error(Q, lam, x)
    if be > tol:
        raise NotEigenpair(f"({lam}, x) is not an eigenpair (backward error {be:.2e})")
    return complex(lam), x


def resolve_groups(Q: QuadPoly, spec: EmbedSpec) -> list[ResolvedGroup]:
    cls = spec.cls
    cache = {}

    def spectrum():
        if "s" not in cache:
            cache["s"] = quad_eig(Q)
        return cache["s"]

    out = []
    for g in spec.groups:
        lam, x = _resolve_vector(Q, g.lam_c, g.x_c, spec.eig_tol, spectrum)
        kind = group_kind(lam, cls)
        lam = _snap(lam, kind, cls)
        # aimed == measured means "keep": follow lam_c to its accurate value
        lam_a = lam if complex(g.lam_a) == complex(g.lam_c) else complex(g.lam_a)
        kind_a = group_kind(lam_a, cls)
        if kind_a != kind:
            exc = SelfPairedAimedMismatch if "single" in (kind, kind_a) else PairingViolation
            raise exc(f"aimed {lam_a} ({kind_a}) does not have the pairing type of {lam} ({kind})")
        lam_a = _snap(lam_a, kind, cls)
        xp = None
        if kind in ("partner", "quad"):
            mu = cls.partner(lam)
            _, xp = _resolve_vector(Q, mu, g.x_partner, spec.eig_tol, spectrum)
            xp = _vector(xp, cls.is_real and kind == "partner")
        x = _vector(x, cls.is_real and kind in ("single", "partner"))
        out.append(ResolvedGroup(kind, lam, lam_a, x, xp, g.params()))
    _check_distinct(out, cls)
    return out


def _eigs_of(g: ResolvedGroup, lam, cls):
    mu = cls.partner(lam)
    return {"single": [lam], "conj": [lam, np.conj(lam)], "partner": [lam, mu],
            "quad": [lam, np.conj(lam), -lam, -np.conj(lam)]}[g.kind]


def _check_distinct(groups, cls):
    ev = np.array([e for g in groups for e in _eigs_of(g, g.lam, cls)], dtype=complex)
    if ev.size < 2:
        return
    rho = max(np.abs(ev).max(), 1.0)
    gaps = np.abs(ev[:, None] - ev[None, :]) + np.diag(np.full(ev.size, np.inf))
    if gaps.min() <= DISTINCT_TOL * rho:
        raise DegenerateEigenvalues("eigenvalues to be changed must be simple and distinct "
                                    f"(min gap {gaps.min():.2e})")


def _lam_block(kind, lam, cls):
    if kind == "single":
        return np.array([[lam.real if cls.is_real else lam]])
    if kind == "conj":
        return rotation_block(lam)
    if kind == "partner":
        mu = cls.partner(lam)
        if cls.is_real:
            return np.diag([lam.real, mu.real])
        return np.diag([lam, mu])
    L = rotation_block(lam)
    return block_diag(L, -L)


def _x_block(g: ResolvedGroup):
    if g.kind == "single":
        return g.x[:, None]
    if g.kind == "conj":
        return np.column_stack([g.x.real, g.x.imag])
    if g.kind == "partner":
        return np.column_stack([g.x, g.x_partner])
    return np.column_stack([g.x.real, g.x.imag, g.x_partner.real, g.x_partner.imag])


def assemble_pair(Q: QuadPoly, spec: EmbedSpec, groups: list[ResolvedGroup] | None = None):
    """Return ``((Xc, Lc), La)`` built from the eigen-groups of ``spec``."""
    groups = resolve_groups(Q, spec) if groups is None else groups
    if not groups:
        raise DimensionMismatch("the embedding spec has no eigen-groups")
    cls = spec.cls
    Xc = np.hstack([_x_block(g) for g in groups])
    Lc = block_diag(*(_lam_block(g.kind, g.lam, cls) for g in groups))
    La = block_diag(*(_lam_block(g.kind, g.lam_a, cls) for g in groups))
    if cls.is_real:
        Xc, Lc, La = np.real(Xc), np.real(Lc), np.real(La)
    return (Xc, Lc), La


# -- P construction ----------------------------------------------------------

def _axis_block(a, alpha, beta):
    """``[[a, beta a/alpha - alpha/2], [beta a/alpha + alpha/2, -a]]`` or the ``alpha = 0`` branch."""
    if alpha == 0.0:
        return np.array([[a, 1.0], [-a, a * a]])
    t = beta * a / alpha
    return np.array([[a, t - alpha / 2], [t + alpha / 2, -a]])


def _ct_block(Q, cls, g):
    x, xt = g.x, g.x_partner
    xs = x.conj()
    alpha = 2 * cls.eps * np.conj(g.lam) * (xs @ Q.M @ xt) + xs @ Q.D @ xt
    if abs(alpha) <= 1e-14 * (abs(g.lam) ** 2 * fro(Q.M) + fro(Q.D)) * np.linalg.norm(x) * np.linalg.norm(xt):
        raise SingularP(f"coupling scalar alpha vanishes for lambda={g.lam}; P block would be singular")
    d = g.lam_a - cls.eps * np.conj(g.lam_a)
    s = 1.0 if cls.eps1 == 1 else 1j
    a, b = g.params["a"], g.params["b"]
    return np.array([[s * alpha * a, b / d], [-cls.eps1 * a / d, s * b * np.conj(alpha)]])


def _real_sym_block(Q, g):
    x = g.x
    xb = x.conj()
    gamma = 2 * np.conj(g.lam) * (xb @ Q.M @ xb) + xb @ Q.D @ xb
    return _axis_block(g.params["a"], gamma.real / 2, -gamma.imag / 2)


def _quad_block(Q, cls, g):
    x, xtb = g.x, g.x_partner.conj()
    xs = x.conj()
    gamma = -2 * np.conj(g.lam) * (xs @ Q.M @ xtb) + xs @ Q.D @ xtb
    Pf = _axis_block(g.params["r"], gamma.real / 2, -gamma.imag / 2)
    Z = np.zeros((2, 2))
    return np.block([[Z, Pf], [-cls.eps1 * Pf, Z]])


def _abc_block(g):
    p = g.params
    return np.array([[p["a"], p["b"]], [-p["c"], p["c"]]])


def p_block(Q: QuadPoly, cls: StructureClass, g: ResolvedGroup):
    if g.unchanged:
        # Lc commutes with the identity and S Lc = eps1 (S Lc)* always holds
        return np.eye(g.width)
    if g.kind == "single":
        if cls.star is Star.T and cls.eps == 1 and not cls.is_real:
            return np.array([[g.params["a"]]])
        return np.eye(1)
    if cls.star is Star.CT:
        return _ct_block(Q, cls, g)
    if cls.eps == 1:
        if cls.is_real and g.kind == "conj":
            return _real_sym_block(Q, g)
        raise UnsupportedClass(f"no P construction for {cls} with a {g.kind} group")
    # (T, eps1, -eps1)
    if not cls.is_real:
        if cls.eps1 == 1:
            return _abc_block(g)
        return g.params["a"] * np.eye(2)
    if g.kind == "quad":
        return _quad_block(Q, cls, g)
    if cls.eps1 == 1:
        return _abc_block(g)
    return np.eye(2)


def _supported(cls: StructureClass):
    if cls.eps1 == -1 and cls.eps2 == -1:
        raise UnsupportedClass(f"{cls.name}: no P construction is available for eps1 = eps2 = -1")


def construct_P(Q: QuadPoly, spec: EmbedSpec, groups: list[ResolvedGroup] | None = None):
    """Block-diagonal ``P`` making the no-spillover update structured.

    Raises ``ParamRetry`` when a block is numerically singular for the chosen
    free parameters.
    """
    _supported(spec.cls)
    groups = resolve_groups(Q, spec) if groups is None else groups
    blocks = []
    for j, g in enumerate(groups, 1):
        B = p_block(Q, spec.cls, g)
        if rcond(B) < P_RCOND_MIN:
            raise ParamRetry(f"P block of group {j} is singular for parameters {g.params}; "
                             "choose different free parameters")
        blocks.append(B)
    P = block_diag(*blocks)
    return np.real(P) if spec.cls.is_real else P


# -- end to end ----------------------------------------------------------------

def _randomized(groups, rng):
    out = []
    for g in groups:
        params = {k: float(rng.choice([-1, 1]) * 10 ** rng.uniform(-1, 1)) for k in PARAM_NAMES}
        out.append(replace(g, params=params))
    return out


def _report(Q, Qn, cls, pair, La, P, delta, Z, ok):
    Xc, Lc = pair
    dev = structure_deviations(Qn, cls)
    return {
        "class": cls.name,
        "field": cls.field.value,
        "method": delta.method,
        "RR_a": relative_residual(Qn, Xc @ P, La),
        "norm_dM": fro(delta.dM),
        "norm_dD": fro(delta.dD),
        "norm_dK": fro(delta.dK),
        "structure_ok": bool(ok),
        "structure_deviation": {"M": dev[0], "D": dev[1], "K": dev[2]},
        "Z_structure_deviation": fro(Z - cls.eps1 * cls.adjoint(Z)) / max(fro(Z), 1e-300) if fro(Z) else 0.0,
        "rcond_P": rcond(P),
        "rcond_R": delta.params.get("rcond_R"),
        "P": P,
        "Z": Z,
    }


def embed(Q: QuadPoly, spec: EmbedSpec, seed: int = 0, max_retries: int = 10):
    """Solve the embedding problem for ``spec``.

    Free parameters start at the values in ``spec``; on a singular ``P`` or
    ``R`` they are redrawn from a seeded generator up to ``max_retries`` times.

    Returns ``(delta, report)``; ``report`` is a plain dict.
    """
    cls = spec.cls
    if not structure_check(Q, cls):
        raise StructureViolation(f"polynomial is not {cls}")
    _supported(cls)
    groups = resolve_groups(Q, spec)
    pair, La = assemble_pair(Q, spec, groups)
    rng = np.random.default_rng(seed)
    last = None
    for attempt in range(max_retries + 1):
        try:
            P = construct_P(Q, spec, groups)
            delta, Z, ok = structured_no_spillover_with_P(Q, cls, pair, La, P)
            break
        except (ParamRetry, SingularR) as exc:
            last = exc
            log.info("attempt %d failed (%s); redrawing free parameters", attempt, exc)
            groups = _randomized(groups, rng)
    else:
        raise ParamRetry(f"no nonsingular P/R after {max_retries} redraws: {last}")
    delta = replace(delta, params={**delta.params, "groups": [g.params for g in groups]})
    Qn = Q.perturbed(delta)
    report = _report(Q, Qn, cls, pair, La, P, delta, Z, ok)
    report["params"] = [g.params for g in groups]
    report["eigenvalues"] = eigen_table(groups, cls)
    return delta, report


def eigen_table(groups, cls):
    rows = []
    for g in groups:
        for before, after in zip(_eigs_of(g, g.lam, cls), _eigs_of(g, g.lam_a, cls)):
            rows.append({"before": complex(before), "after": complex(after),
                         "partner": complex(cls.partner(before))})
    return rows


def changed_eigenvalues(groups, cls):
    before = [e for g in groups for e in _eigs_of(g, g.lam, cls)]
    after = [e for g in groups for e in _eigs_of(g, g.lam_a, cls)]
    return np.array(before, dtype=complex), np.array(after, dtype=complex)


def fixed_pair_residual(Q: QuadPoly, Qn: QuadPoly, removed):
    """``RR_f``: relative residual in ``Qn`` of all eigenpairs of ``Q`` except ``removed``.

    Returns ``(rr_f, lam_f)``.
    """
    lam, X = quad_eig(Q)
    lam_f, X_f = split_spectrum(lam, X, removed)
    if lam_f.size == 0:
        return 0.0, lam_f
    return relative_residual(Qn, X_f, np.diag(lam_f)), lam_f


# -- classical special cases -------------------------------------------------

def _require_real_symmetric(Q):
    if np.iscomplexobj(Q.M) or not structure_check(Q, StructureClass.from_name("symmetric")):
        raise StructureViolation("M, D, K must be real symmetric")


def _spd(A):
    try:
        np.linalg.cholesky((A + A.T) / 2)
        return True
    except np.linalg.LinAlgError:
        return False


def _chu_parts(Q, Xc, Lc, La, P):
    if rcond(Lc) < P_RCOND_MIN or rcond(La) < P_RCOND_MIN:
        raise SingularLambda("Lc and La must be nonsingular")
    if rcond(Q.K) < P_RCOND_MIN:
        raise SingularK("K is numerically singular")
    Lci = np.linalg.inv(Lc)
    M1 = Xc.T @ Q.M @ Xc
    K1 = Xc.T @ Q.K @ Xc
    Theta = P @ La @ checked_inv(P, "P", SingularP)
    return Lci, M1, K1, Theta


def chu_kuo_datta_update(Q: QuadPoly, Xc, Lc, La, P, tol: float = 1e-8):
    """Real symmetric update written with ``K`` instead of ``D``.

    ``Z = (P La - Lc P)(K1 P - Lc^T M1 P La)^{-1} Lc^T``,
    ``dM = M Xc Z Xc^T M``, ``dD = -M Xc Z Lc^{-T} Xc^T K - K Xc Lc^{-1} Z Xc^T M``,
    ``dK = K Xc Lc^{-1} Z Lc^{-T} Xc^T K``, with ``M1 = Xc^T M Xc``, ``K1 = Xc^T K Xc``.

    ``psd`` holds the smallest eigenvalues of the certificate
    ``(Theta^T M1 - K1 Lc^{-1})(Lc - Theta)``, ``Theta = P La P^{-1}``, and of
    ``dM``, ``dK``, plus boolean verdicts at relative tolerance ``tol``.

    Returns ``(delta, Z, psd)``.
    """
    _require_real_symmetric(Q)
    Xc, Lc, La, P = (np.asarray(A, dtype=float) for A in (Xc, Lc, La, P))
    Lci, M1, K1, Theta = _chu_parts(Q, Xc, Lc, La, P)
    inner = K1 @ P - Lc.T @ M1 @ P @ La
    Z = (P @ La - Lc @ P) @ checked_inv(inner, "K1 P - Lc^T M1 P La", SingularInnerMatrix) @ Lc.T
    MX, KX = Q.M @ Xc, Q.K @ Xc
    KXL = KX @ Lci
    dM = MX @ Z @ MX.T
    dD = -MX @ Z @ KXL.T - KXL @ Z @ MX.T
    dK = KXL @ Z @ KXL.T
    psd = psd_certificates(psd_criterion(M1, K1, Lc, Theta), dM, dK, tol)
    delta = PerturbationTriple(dM, dD, dK, method="chu", params={"P": P},
                               structure_preserved=True, psd=(psd["dM_ok"], psd["dK_ok"]))
    return delta, Z, psd


def psd_criterion(M1, K1, Lc, Theta):
    C = (Theta.T @ M1 - K1 @ np.linalg.inv(Lc)) @ (Lc - Theta)
    return (C + C.T) / 2


def _min_eig(A):
    A = (A + A.T) / 2
    return float(np.linalg.eigvalsh(A)[0]) if A.size else 0.0


def psd_certificates(C, dM, dK, tol: float = 1e-8):
    out = {"criterion_min_eig": _min_eig(C), "dM_min_eig": _min_eig(dM), "dK_min_eig": _min_eig(dK)}
    out["criterion_ok"] = out["criterion_min_eig"] >= -tol * max(fro(C), 1e-300)
    out["dM_ok"] = out["dM_min_eig"] >= -tol * max(fro(dM), 1e-300)
    out["dK_ok"] = out["dK_min_eig"] >= -tol * max(fro(dK), 1e-300)
    return out


def kuo_datta_equivalence_check(Q: QuadPoly, Xc, Lc, La, P, tol: float = 1e-8) -> bool:
    """Check that ``Z`` of :func:`chu_kuo_datta_update` solves the Kuo-Datta equation with ``d = 1``.

    ``(Theta^T M1 - K1 Lc^{-1}) Z M1 + M1 Z (M1 Theta - Lc^{-T} K1) = (Lc - Theta)^T M1 + M1 (Lc - Theta)``.
    """
    _, Z, _ = chu_kuo_datta_update(Q, Xc, Lc, La, P)
    Xc, Lc, La, P = (np.asarray(A, dtype=float) for A in (Xc, Lc, La, P))
    Lci, M1, K1, Theta = _chu_parts(Q, Xc, Lc, La, P)
    lhs = (Theta.T @ M1 - K1 @ Lci) @ Z @ M1 + M1 @ Z @ (M1 @ Theta - Lci.T @ K1)
    rhs = (Lc - Theta).T @ M1 + M1 @ (Lc - Theta)
    scale = fro(lhs) + fro(rhs)
    return scale == 0.0 or fro(lhs - rhs) <= tol * scale


def _require_gyroscopic(Q):
    if np.iscomplexobj(Q.M):
        raise NotGyroscopic("coefficients must be real")
    if not structure_check(Q, StructureClass.from_name("t-even")):
        raise NotGyroscopic("need M, K symmetric and D skew-symmetric")
    if not (_spd(Q.M) and _spd(Q.K)):
        raise NotGyroscopic("M and K must be positive definite")


def _require_skew(L, what):
    if fro(L + L.T) > 1e-12 * max(fro(L), 1.0):
        raise PairingViolation(f"{what} must consist of [[0, w], [-w, 0]] blocks (purely imaginary data)")
    if rcond(L) < P_RCOND_MIN:
        raise SingularLambda(f"{what} is singular (zero eigenvalue)")


def mao_dai_update(Q: QuadPoly, Xc, Lc, La, P):
    """Gyroscopic update (M, K positive definite, D skew) for purely imaginary data.

    ``Z = (Lc P - P La)(M1 P La + Lc^{-T} K1 P)^{-1}``,
    ``dM = M Xc Z Xc^T M``, ``dD = M Xc Z Lc^{-T} Xc^T K - K Xc Lc^{-1} Z Xc^T M``,
    ``dK = -K Xc Lc^{-1} Z Lc^{-T} Xc^T K``.

    Returns ``(delta, Z)``.
    """
    _require_gyroscopic(Q)
    Xc, Lc, La, P = (np.asarray(A, dtype=float) for A in (Xc, Lc, La, P))
    _require_skew(Lc, "Lc")
    _require_skew(La, "La")
    checked_inv(P, "P", SingularP)
    Lci = np.linalg.inv(Lc)
    M1 = Xc.T @ Q.M @ Xc
    K1 = Xc.T @ Q.K @ Xc
    inner = M1 @ P @ La + Lci.T @ K1 @ P
    Z = (Lc @ P - P @ La) @ checked_inv(inner, "M1 P La + Lc^{-T} K1 P", SingularInnerMatrix)
    MX, KX = Q.M @ Xc, Q.K @ Xc
    KXL = KX @ Lci
    dM = MX @ Z @ MX.T
    dD = MX @ Z @ KXL.T - KXL @ Z @ MX.T
    dK = -KXL @ Z @ KXL.T
    delta = PerturbationTriple(dM, dD, dK, method="maodai", params={"P": P}, structure_preserved=True)
    return delta, Z


def mao_dai_E(Q: QuadPoly, Xc, Lc, La, P):
    """``E = (P^T K1 Lc^{-1} - La P^T M1)^{-1} (La P^T - P^T Lc)``."""
    Xc, Lc, La, P = (np.asarray(A, dtype=float) for A in (Xc, Lc, La, P))
    M1 = Xc.T @ Q.M @ Xc
    K1 = Xc.T @ Q.K @ Xc
    A = P.T @ K1 @ np.linalg.inv(Lc) - La @ P.T @ M1
    return checked_inv(A, "E inner matrix", SingularInnerMatrix) @ (La @ P.T - P.T @ Lc)


def default_grid(n_points: int = 11, lo: float = 1e-4, hi: float = 1e2):
    """``n_points`` log-spaced values in ``[lo, hi]`` followed by their negatives."""
    v = np.logspace(np.log10(lo), np.log10(hi), n_points)
    return list(v) + list(-v)


def psd_preserving_algorithm(Q: QuadPoly, spec: EmbedSpec, param_grid=None, tol: float = 1e-8):
    """Search the real-symmetric ``P`` family for an update with ``dM, dK >= 0``.

    ``param_grid`` is a list (one entry per changed complex group) of candidate
    ``a`` values, or a single list used for every group; default
    :func:`default_grid`. Points are tried in lexicographic grid order and the
    first feasible one is returned.

    Returns ``(delta, chosen)`` where ``chosen`` maps ``a1, a2, ...`` to values.
    """
    _require_real_symmetric(Q)
    if not (_spd(Q.M) and _spd(Q.K)):
        raise StructureViolation("M and K must be symmetric positive definite")
    cls = StructureClass.from_name("symmetric")
    spec = replace(spec, cls=cls)
    groups = resolve_groups(Q, spec)
    pair, La = assemble_pair(Q, spec, groups)
    Xc, Lc = pair
    if rcond(Lc) < P_RCOND_MIN or rcond(La) < P_RCOND_MIN:
        raise SingularLambda("eigenvalues to be changed and aimed values must be nonzero")
    free = [j for j, g in enumerate(groups) if g.kind == "conj" and not g.unchanged]
    if param_grid is None:
        grids = [default_grid()] * len(free)
    elif len(param_grid) and np.ndim(param_grid[0]) == 0:
        grids = [list(param_grid)] * len(free)
    else:
        grids = [list(gr) for gr in param_grid]
        if len(grids) != len(free):
            raise ValueError(f"param_grid has {len(grids)} axes, spec has {len(free)} free groups")
    M1 = Xc.T @ Q.M @ Xc
    K1 = Xc.T @ Q.K @ Xc
    best = -np.inf
    for point in itertools.product(*grids):
        trial = list(groups)
        for j, a in zip(free, point):
            trial[j] = replace(groups[j], params={**groups[j].params, "a": float(a)})
        try:
            P = construct_P(Q, spec, trial)
            Theta = P @ La @ np.linalg.inv(P)
        except ParamRetry:
            continue
        C = psd_criterion(M1, K1, Lc, Theta)
        me = _min_eig(C)
        best = max(best, me / max(fro(C), 1e-300))
        if me < -tol * max(fro(C), 1e-300):
            continue
        try:
            delta, Z, psd = chu_kuo_datta_update(Q, Xc, Lc, La, P, tol)
        except (SingularInnerMatrix, SingularP):
            continue
        if psd["dM_ok"] and psd["dK_ok"]:
            chosen = {f"a{j + 1}": float(a) for j, a in zip(free, point)}
            delta = replace(delta, method="psd-algo", params={**delta.params, "chosen": chosen,
                                                              "psd": psd})
            return delta, chosen
    raise NoFeasibleParams("no grid point gives a positive semi-definite certificate", best=best)


# -- method dispatch -------------------------------------------------------------

METHODS = ("auto", "p-identity", "p-constructed", "chu", "maodai", "psd-algo")


def _require_class(cls, name, method):
    want = StructureClass.from_name(name)
    if (cls.star, cls.eps1, cls.eps2, cls.field) != (want.star, want.eps1, want.eps2, want.field):
        raise UnsupportedClass(f"method {method!r} needs the real {want.name} class, got {cls}")


def solve(Q: QuadPoly, spec: EmbedSpec, method: str = "auto", seed: int = 0,
          max_retries: int = 10, param_grid=None):
    """Run one of :data:`METHODS` and return ``(delta, report)``.

    ``auto`` and ``p-constructed`` use :func:`embed`; ``p-identity`` takes ``P = I`` and
    reports whether the result happens to be structured; ``chu``, ``maodai``
    and ``psd-algo`` are the classical special cases.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if method in ("auto", "p-constructed"):
        return embed(Q, spec, seed=seed, max_retries=max_retries)
    cls = spec.cls
    if not structure_check(Q, cls):
        raise StructureViolation(f"polynomial is not {cls}")
    groups = resolve_groups(Q, spec)
    pair, La = assemble_pair(Q, spec, groups)
    Xc, Lc = pair
    extra = {}
    if method == "p-identity":
        delta, Z, ok = structured_no_spillover(Q, cls, pair, La)
        P = np.eye(La.shape[0])
    elif method == "chu":
        _require_class(cls, "symmetric", method)
        P = construct_P(Q, spec, groups)
        delta, Z, psd = chu_kuo_datta_update(Q, Xc, Lc, La, P)
        extra["psd"] = psd
    elif method == "maodai":
        _require_class(cls, "t-even", method)
        P = construct_P(Q, spec, groups)
        delta, Z = mao_dai_update(Q, Xc, Lc, La, P)
    else:
        _require_class(cls, "symmetric", method)
        delta, chosen = psd_preserving_algorithm(Q, spec, param_grid)
        P = delta.params["P"]
        _, Z, psd = chu_kuo_datta_update(Q, Xc, Lc, La, P)
        extra["psd"] = psd
        groups = [replace(g, params={**g.params, **({"a": chosen[f"a{j + 1}"]}
                                                    if f"a{j + 1}" in chosen else {})})
                  for j, g in enumerate(groups)]
    Qn = Q.perturbed(delta)
    if method != "p-identity":
        ok = structure_check(Qn, cls)
        delta = replace(delta, structure_preserved=ok)
    report = _report(Q, Qn, cls, pair, La, P, delta, Z, ok)
    report["params"] = [g.params for g in groups]
    report["eigenvalues"] = eigen_table(groups, cls)
    report.update(extra)
    return delta, report


def spillover_check(Q: QuadPoly, Qn: QuadPoly, spec: EmbedSpec, tol: float = 1e-6):
    """Compare the spectrum of ``Qn`` with (aimed values) + (fixed eigenvalues of ``Q``).

    Returns a dict with ``RR_f``, ``spectrum_mismatch`` and ``ok``.
    """
    groups = resolve_groups(Q, spec)
    before, after = changed_eigenvalues(groups, spec.cls)
    rr_f, lam_f = fixed_pair_residual(Q, Qn, before)
    lam_new, _ = quad_eig(Qn)
    mm = max_relative_mismatch(np.concatenate([after, lam_f]), lam_new)
    return {"RR_f": rr_f, "spectrum_mismatch": mm, "ok": bool(mm <= tol)}
