"""Mirroring determinantal roots across the unit circle.

Two pipelines produce real polynomials with the same spectral density:

``svd``
    For each root, rotate by the right singular vectors of ``P(alpha)`` so
    the last column vanishes at ``alpha``, then swap the factor
    ``(z - alpha)`` in that column for ``(1 - conj(alpha) z)``.  A complex
    pair is done member by member; the complex intermediate is brought
    back to real coefficients with the unitary polar factor of ``P(1)``.

``qr``
    For a complex pair, QR-decompose the real and imaginary parts of a
    kernel vector of ``P(alpha)`` and post-multiply by a real 2 x 2
    all-pass (:func:`allpass.blaschke.build_bivariate`).  No complex
    intermediate is formed.

Real roots are handled identically by both pipelines.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ._exceptions import (
    DeflationResidual,
    DegenerateSingularValues,
    KernelDegenerate,
    NotARoot,
    NotDivisible,
    RankDeficiencyMismatch,
    ResidualImagTooLarge,
    RootRelocationAmbiguous,
    SpanUnsolvable,
)
from .blaschke import (
    ElementaryBlaschke,
    build_bivariate,
    bivariate_to_polyfrac,
    eval_elementary,
)
from .polymat import (
    PolyMat,
    deflate_column,
    eval_polymat,
    eval_scale,
    max_imag,
    mul,
    mul_const,
)
from .roots import Kind, RootGroup, determinantal_roots, refine_root
from .tolerances import DEFAULT

log = logging.getLogger(__name__)

__all__ = [
    "MirrorConfig",
    "KernelQR",
    "UnitaryParams",
    "mirror_root",
    "mirror_real_root",
    "mirror_pair_svd",
    "realize_via_polar",
    "kernel_qr",
    "mirror_pair_qr",
    "unitary_from_params",
    "params_from_unitary",
    "solve_unitary_chain",
    "eval_unitary_chain",
    "apply_config",
    "mirrored_groups",
    "METHODS",
]

METHODS = ("svd", "qr")

# P(alpha) counts as singular when sigma_min <= ROOT_TOL * sigma_max
ROOT_TOL = 1e-7


@dataclass(frozen=True)
class MirrorConfig:
    """One in/out flag per root group (a pair has a single flag)."""

    selections: tuple

    def __post_init__(self):
        object.__setattr__(self, "selections", tuple(bool(s) for s in self.selections))

    def __len__(self):
        return len(self.selections)

    @classmethod
    def from_bitstring(cls, bits):
        bits = bits.strip()
        if any(b not in "01" for b in bits):
            raise ValueError(f"config must be a 0/1 string, got {bits!r}")
        return cls(tuple(b == "1" for b in bits))

    @classmethod
    def keep_all(cls, k):
        return cls((False,) * k)

    def to_bitstring(self):
        return "".join("1" if s else "0" for s in self.selections)


def _scale(P):
    return max(1.0, float(np.abs(P.coeffs).max()))


def _check_real(P, tol, what):
    mi = max_imag(P)
    if mi > tol * _scale(P):
        raise ResidualImagTooLarge(f"{what}: imaginary residue {mi:.3e}")
    return P.real()


def _null_vector(M, scale, rank_tol=ROOT_TOL):
    """Right singular basis ``V`` of a rank-deficient ``M``; the kernel is ``V[:, -1]``.

    ``scale`` is the magnitude ``M`` is compared against (see
    :func:`allpass.polymat.eval_scale`).
    """
    M = np.asarray(M)
    if np.iscomplexobj(M) and np.abs(M.imag).max() == 0:
        M = M.real
    _, s, Vh = np.linalg.svd(M)
    V = Vh.conj().T
    smax = max(scale, np.finfo(float).tiny)
    if s[-1] > rank_tol * smax:
        raise NotARoot(f"matrix is not singular (sigma_min / sigma_max = {s[-1] / smax:.3e})")
    if s.size > 1 and s[-2] <= rank_tol * smax:
        raise RankDeficiencyMismatch("rank deficiency is larger than one")
    return V


def _phase_normalize(V):
    """Rotate each column so its last entry is real and non-negative."""
    V = np.array(V)
    for j in range(V.shape[1]):
        x = V[-1, j]
        if abs(x) > 0:
            V[:, j] *= np.conj(x) / abs(x)
    return V


def mirror_root(P, alpha, tol=DEFAULT):
    """Replace the root ``alpha`` by ``1 / conj(alpha)``.

    Computes ``P(z) V diag(I, B(z, alpha))`` expanded as a polynomial of
    the same degree.  Works for real and complex ``alpha``; for a complex
    ``alpha`` the output is in general complex.

    Returns
    -------
    (PolyMat, ndarray)
        The transformed polynomial and the unitary ``V``.
    """
    alpha = complex(alpha)
    ElementaryBlaschke(alpha)  # rejects roots on the unit circle
    M = eval_polymat(P, alpha)
    real_case = abs(alpha.imag) == 0 and max_imag(P) == 0
    V = _phase_normalize(_null_vector(M.real if real_case else M, eval_scale(P, alpha)))
    PV = mul_const(P, V)
    try:
        PV, _ = deflate_column(PV, P.n - 1, alpha, tol=tol.division)
    except NotDivisible as exc:
        raise NotARoot(str(exc)) from exc
    c = np.array(PV.coeffs)
    col = c[:, -1, :].copy()
    c[:, -1, 1:] = col[:, 1:] - np.conj(alpha) * col[:, :-1]
    c[:, -1, 0] = col[:, 0]
    out = PolyMat(c, check=False)
    if real_case:
        out = out.real()
        V = V.real
    return out, V


def mirror_real_root(P, alpha, tol=DEFAULT):
    """Mirror a real root; a real ``P`` stays real."""
    alpha = complex(alpha)
    if abs(alpha.imag) > tol.real * max(1.0, abs(alpha)):
        raise ValueError(f"{alpha} is not real; use mirror_pair_svd / mirror_pair_qr")
    return mirror_root(P, alpha.real, tol)


def mirror_pair_svd(P, group, tol=DEFAULT):
    """Mirror both members of a conjugate pair, one after the other.

    The result is a valid spectral factor with the pair reflected but its
    coefficients are complex; see :func:`realize_via_polar`.
    """
    if group.kind is not Kind.COMPLEX_PAIR:
        raise ValueError("mirror_pair_svd needs a ComplexPair group")
    a_plus = complex(group.alpha)
    P1, _ = mirror_root(P, a_plus, tol)
    P2, _ = mirror_root(P1, a_plus.conjugate(), tol)
    return P2


def realize_via_polar(P_tilde, tol=DEFAULT):
    """Right-multiply by the inverse unitary polar factor of ``P_tilde(1)``.

    With ``P_tilde(1) = Y S Z^*`` the unitary polar factor is ``U = Y Z^*``
    and ``P_tilde(1) U^* = Y S Y^*`` is the Hermitian square root of
    ``P_tilde(1) P_tilde(1)^*``.  That matrix is real when the product is
    real, and the same constant makes the whole polynomial real when
    ``P_tilde`` differs from a real spectral factor by a constant unitary
    matrix, which is what :func:`mirror_pair_svd` produces.  The polar
    factor is unique for non-singular ``P_tilde(1)`` even if singular
    values repeat.
    """
    M = eval_polymat(P_tilde, 1.0)
    H = M @ M.conj().T
    if np.abs(H.imag).max() > tol.realness * max(1.0, np.abs(H).max()):
        raise ResidualImagTooLarge("P(1) P(1)^* is not real")
    Y, s, Zh = np.linalg.svd(M)
    if s[-1] <= tol.rank * s[0]:
        raise DegenerateSingularValues("P(1) is singular; the polar factor is not unique")
    out = mul_const(P_tilde, Zh.conj().T @ Y.conj().T)
    return _check_real(out, tol.realness, "realize_via_polar")


@dataclass(frozen=True)
class KernelQR:
    v_r: np.ndarray
    v_i: np.ndarray
    Q_tilde: np.ndarray
    R: np.ndarray

    @property
    def w(self):
        return self.R @ np.array([1.0, 1.0j])


def kernel_qr(P, alpha_plus, tol=DEFAULT):
    """QR decomposition of the real/imaginary parts of a kernel vector of ``P(alpha_plus)``."""
    alpha_plus = complex(alpha_plus)
    V = _null_vector(eval_polymat(P, alpha_plus), eval_scale(P, alpha_plus))
    v = V[:, -1]
    # fix the free phase so the real part carries most of the norm
    theta = 0.5 * np.angle(np.sum(v * v))
    v = v * np.exp(-1j * theta)
    # the phase is fixed only up to sign; make the largest entry of v_r positive
    k = int(np.argmax(np.abs(v.real)))
    if v.real[k] < 0:
        v = -v
    v_r, v_i = v.real.copy(), v.imag.copy()
    X = np.column_stack([v_r, v_i])
    sv = np.linalg.svd(X, compute_uv=False)
    if sv[-1] <= 1e-8 * sv[0]:
        raise KernelDegenerate("real and imaginary parts of the kernel vector are dependent")
    Q, R = np.linalg.qr(X, mode="complete")
    signs = np.sign(np.diag(R[:2, :2]))
    signs[signs == 0] = 1.0
    Q[:, :2] = Q[:, :2] * signs
    R2 = (R[:2, :2].T * signs).T
    return KernelQR(v_r, v_i, Q, R2)


def mirror_pair_qr(P, group, tol=DEFAULT):
    """Mirror a conjugate pair of a real ``P`` with a real bivariate Blaschke factor.

    Computes ``P(z) Q diag(B_2(z), I)``; with ``B_2 = b / d`` the product
    ``P Q diag(b, d I)`` is divided by ``d(z) = (z - a)(z - conj(a))``
    column by column.
    """
    if group.kind is not Kind.COMPLEX_PAIR:
        raise ValueError("mirror_pair_qr needs a ComplexPair group")
    if max_imag(P) > tol.realness * _scale(P):
        raise ValueError("mirror_pair_qr needs a real polynomial")
    P = P.real()
    a = complex(group.alpha)
    kq = kernel_qr(P, a, tol)
    f = build_bivariate(a, kq.w, tol)
    b, sq = bivariate_to_polyfrac(f)

    n = P.n
    G = np.zeros((n, n, 3), dtype=complex)
    G[:2, :2, :] = b.coeffs
    for k in range(2, n):
        G[k, k, :] = sq.denominator
    prod = mul(mul_const(P, kq.Q_tilde), PolyMat(G, check=False))
    try:
        for root in (a, a.conjugate()):
            for col in range(n):
                prod, _ = deflate_column(prod, col, root, tol=tol.division)
    except NotDivisible as exc:
        raise DeflationResidual(str(exc)) from exc
    out = prod.with_degree(P.q)
    return _check_real(out, tol.realness, "mirror_pair_qr")


@dataclass(frozen=True)
class UnitaryParams:
    phi0: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0


def unitary_from_params(p):
    """``e^{i phi0/2} [[e^{i phi1} c, e^{i phi2} s], [-e^{-i phi2} s, e^{-i phi1} c]]``."""
    c, s = np.cos(p.phi3), np.sin(p.phi3)
    U = np.array([
        [np.exp(1j * p.phi1) * c, np.exp(1j * p.phi2) * s],
        [-np.exp(-1j * p.phi2) * s, np.exp(-1j * p.phi1) * c],
    ])
    return np.exp(0.5j * p.phi0) * U


def params_from_unitary(U):
    """Inverse of :func:`unitary_from_params` (one of the equivalent angle sets)."""
    U = np.asarray(U, dtype=complex)
    phi0 = float(np.angle(np.linalg.det(U)))
    S = U * np.exp(-0.5j * phi0)
    a, b = S[0, 0], S[0, 1]
    return UnitaryParams(
        phi0=phi0,
        phi1=float(np.angle(a)),
        phi2=float(np.angle(b)),
        phi3=float(np.arctan2(abs(b), abs(a))),
    )


def _first_column_params(u):
    """Angles (phi2, phi3) with phi0 = phi1 = 0 whose first column spans ``u``."""
    u = np.asarray(u, dtype=complex)
    nu = np.linalg.norm(u)
    if nu == 0:
        raise SpanUnsolvable("zero direction")
    u = u / nu
    if abs(u[0]) > 0:
        u = u * np.conj(u[0]) / abs(u[0])
    phi3 = float(np.arctan2(abs(u[1]), abs(u[0])))
    phi2 = float(-np.angle(-u[1])) if abs(u[1]) > 0 else 0.0
    return UnitaryParams(0.0, 0.0, phi2, phi3)


def _b_diag(z, alpha):
    return np.diag([eval_elementary(ElementaryBlaschke(alpha), z), 1.0])


def solve_unitary_chain(R, alpha_plus):
    """Unitary factors of ``V_b diag(B(z,a),1) V_g diag(B(z,conj a),1) V_d``.

    ``V_b`` puts ``R (1, i)^T`` in its first column (the kernel direction at
    ``a``), ``V_g`` does the same for the kernel direction at ``conj(a)``
    after the first factor, and ``V_d`` normalises the chain to the
    identity at ``z = 1``.  The chain then has real values at real ``z``.
    """
    R = np.asarray(R, dtype=float)
    if R.shape != (2, 2) or min(abs(R[0, 0]), abs(R[1, 1])) <= 1e-12 * np.abs(R).max():
        raise SpanUnsolvable("R must be a non-singular upper-triangular 2 x 2 matrix")
    a = complex(alpha_plus)
    ac = a.conjugate()
    beta = _first_column_params(R @ np.array([1.0, 1.0j]))
    Vb = unitary_from_params(beta)
    target = R @ np.array([1.0, -1.0j])
    u = np.linalg.solve(Vb @ _b_diag(ac, a), target)
    gamma = _first_column_params(u)
    Vg = unitary_from_params(gamma)
    T1 = Vb @ _b_diag(1.0, a) @ Vg @ _b_diag(1.0, ac)
    delta = params_from_unitary(T1.conj().T)
    return beta, gamma, delta


def eval_unitary_chain(params, alpha_plus, z):
    beta, gamma, delta = params
    a = complex(alpha_plus)
    return (
        unitary_from_params(beta) @ _b_diag(z, a)
        @ unitary_from_params(gamma) @ _b_diag(z, a.conjugate())
        @ unitary_from_params(delta)
    )


def mirrored_groups(groups, config):
    """Groups as they are after applying ``config``."""
    return [g.mirrored() if s else g for g, s in zip(groups, config.selections)]


def _locate(roots, target, tol):
    d = np.abs(np.asarray(roots) - target)
    order = np.argsort(d)
    if len(order) > 1 and d[order[1]] - d[order[0]] <= tol.multiplicity * max(1.0, abs(target)):
        raise RootRelocationAmbiguous(f"two roots equally close to {target}")
    return complex(roots[order[0]])


def apply_config(P, groups, config, method="qr", tol=DEFAULT):
    """Mirror every selected group of a real ``P``; returns a real polynomial.

    Groups are processed in order.  Before each step the group's root is
    re-located among the roots of the current polynomial, since earlier
    steps move the computed roots by rounding error.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if len(config) != len(groups):
        raise ValueError(f"config has {len(config)} flags for {len(groups)} groups")
    if max_imag(P) > tol.realness * _scale(P):
        raise ValueError("apply_config needs a real polynomial")
    cur = P.real()
    for g, flag in zip(groups, config.selections):
        if not flag:
            continue
        alpha = refine_root(cur, _locate(determinantal_roots(cur), g.alpha, tol))
        log.debug("mirroring %s group at %s (%s)", g.kind.value, alpha, method)
        if g.kind is Kind.REAL:
            cur, _ = mirror_real_root(cur, alpha.real, tol)
        else:
            grp = RootGroup(Kind.COMPLEX_PAIR, complex(alpha.real, abs(alpha.imag)))
            if method == "qr":
                cur = mirror_pair_qr(cur, grp, tol)
            else:
                cur = realize_via_polar(mirror_pair_svd(cur, grp, tol), tol)
    return cur
