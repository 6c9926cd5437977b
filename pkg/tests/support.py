"""Independent oracles and random instance generators shared by the tests.

The eigenvalue oracle here deliberately avoids the package's linearization:
it forms the first companion matrix with an explicit ``M^{-1}`` and calls the
standard (non-generalized) eigensolver.
"""

import numpy as np

from quadembed.core import QuadPoly, Star, StructureClass, rcond
from quadembed.seep import EigenGroup, group_kind

# (name, field) for every named class over each field where it makes sense
CLASS_FIELDS = [
    ("symmetric", "real"), ("symmetric", "complex"), ("hermitian", "complex"),
    ("t-odd", "real"), ("t-odd", "complex"), ("*-odd", "complex"),
    ("t-even", "real"), ("t-even", "complex"), ("*-even", "complex"),
]
CLASSES = [StructureClass.from_name(n, f) for n, f in CLASS_FIELDS]
CLASS_IDS = [f"{n}-{f}" for n, f in CLASS_FIELDS]
WIDTH = {"single": 1, "conj": 2, "partner": 2, "quad": 4}


def oracle_eigvals(M, D, K):
    """All 2n eigenvalues from ``[[-M^-1 D, -M^-1 K], [I, 0]]``."""
    M, D, K = (np.asarray(A) for A in (M, D, K))
    n = M.shape[0]
    Minv = np.linalg.inv(M)
    C = np.block([[-Minv @ D, -Minv @ K], [np.eye(n), np.zeros((n, n))]])
    return np.linalg.eigvals(C)


def oracle_eigpairs(M, D, K):
    M, D, K = (np.asarray(A) for A in (M, D, K))
    n = M.shape[0]
    Minv = np.linalg.inv(M)
    C = np.block([[-Minv @ D, -Minv @ K], [np.eye(n), np.zeros((n, n))]])
    lam, V = np.linalg.eig(C)
    return lam, V[n:, :]  # lower block of [lam x; x]


def greedy_mismatch(a, b):
    """Max relative distance under greedy nearest matching (no optimal assignment)."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    assert len(a) == len(b)
    worst = 0.0
    for x in sorted(a, key=lambda z: (round(z.real, 6), round(z.imag, 6))):
        j = int(np.argmin([abs(x - y) for y in b]))
        worst = max(worst, abs(x - b[j]) / max(1.0, abs(x)))
        b.pop(j)
    return worst


def rel(A, B):
    A, B = np.asarray(A), np.asarray(B)
    s = max(np.linalg.norm(A), np.linalg.norm(B))
    return np.linalg.norm(A - B) / s if s else 0.0


def structured_matrix(rng, n, e, cls):
    A = rng.standard_normal((n, n))
    if not cls.is_real:
        A = A + 1j * rng.standard_normal((n, n))
    return (A + e * cls.adjoint(A)) / 2


def random_poly(rng, cls, n):
    """Random ``Q`` in ``cls`` with a well conditioned leading coefficient."""
    while True:
        M = structured_matrix(rng, n, cls.eps1, cls)
        D = structured_matrix(rng, n, cls.eps2, cls)
        K = structured_matrix(rng, n, cls.eps1, cls)
        if cls.eps1 == 1:
            M = M + n * np.eye(n)
        Q = QuadPoly(M, D, K)
        if rcond(Q.M) > 1e-6:
            return Q


def random_gyroscopic(rng, n):
    """``M, K`` SPD and ``D`` skew, so all eigenvalues are on the imaginary axis."""
    A = rng.standard_normal((n, n))
    B = rng.standard_normal((n, n))
    G = rng.standard_normal((n, n))
    return QuadPoly(A @ A.T + n * np.eye(n), G - G.T, B @ B.T + n * np.eye(n))


def random_spd_symmetric(rng, n):
    """``M, K`` SPD and ``D`` symmetric (a damped mass-spring type system)."""
    A = rng.standard_normal((n, n))
    B = rng.standard_normal((n, n))
    G = rng.standard_normal((n, n))
    return QuadPoly(A @ A.T + n * np.eye(n), (G + G.T) / 2, B @ B.T + 4 * n * np.eye(n))


def aimed_value(rng, lam, kind, cls):
    """Move ``lam`` to a nearby value of the same pairing type."""
    d = complex(rng.uniform(0.2, 0.6), rng.uniform(0.2, 0.6))
    if kind == "single":
        if cls.is_real:
            return lam + d.real
        if cls.star is Star.CT:
            return lam + (d.real if cls.eps == 1 else 1j * d.imag)
        return lam + d
    if kind == "conj":
        return lam + (1j * d.imag if cls.eps == -1 else d)
    if kind == "partner" and cls.is_real:
        return lam + d.real
    return lam + d


def orbit(lam, kind, cls):
    """Eigenvalues consumed by a group rooted at ``lam``."""
    if kind == "single":
        return [lam]
    if kind == "conj":
        return [lam, np.conj(lam)]
    if kind == "partner":
        return [lam, cls.partner(lam)]
    return [lam, np.conj(lam), -lam, -np.conj(lam)]


def pick_groups(rng, Q, cls, p, lam=None):
    """Eigen-groups of total width ``p`` with aimed values (``None`` if impossible)."""
    if lam is None:
        lam = oracle_eigvals(Q.M, Q.D, Q.K)
    used, groups, width = [], [], 0
    for i in rng.permutation(len(lam)):
        l0 = complex(lam[i])
        if any(abs(l0 - u) < 1e-6 * max(1, abs(l0)) for u in used):
            continue
        kind = group_kind(l0, cls)
        if width + WIDTH[kind] > p:
            continue
        used += orbit(l0, kind, cls)
        groups.append(EigenGroup(l0, aimed_value(rng, l0, kind, cls)))
        width += WIDTH[kind]
        if width == p:
            return groups
    return None


def aimed_and_removed(groups, cls):
    kinds = [group_kind(g.lam_c, cls) for g in groups]
    removed = [v for g, k in zip(groups, kinds) for v in orbit(g.lam_c, k, cls)]
    aimed = [v for g, k in zip(groups, kinds) for v in orbit(g.lam_a, k, cls)]
    return np.array(aimed), np.array(removed)


def remove_nearest(lam, removed):
    lam = list(np.asarray(lam, dtype=complex))
    for r in removed:
        j = int(np.argmin([abs(r - x) for x in lam]))
        lam.pop(j)
    return np.array(lam)


def seeded_instance(seed, cls, n, p):
    """Random structured problem; retries draws until ``p`` columns can be picked."""
    rng = np.random.default_rng(seed)
    while True:
        Q = random_poly(rng, cls, n)
        groups = pick_groups(rng, Q, cls, p)
        if groups:
            return Q, groups
