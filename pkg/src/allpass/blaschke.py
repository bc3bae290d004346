"""Scalar and 2 x 2 all-pass building blocks.

* :class:`ElementaryBlaschke` -- ``B(z, a) = (1 - conj(a) z) / (z - a)``
* :class:`SquaredBlaschke` -- ``B(z, a) B(z, conj(a))``, real coefficients
* :class:`BivariateBlaschke` -- a real 2 x 2 all-pass with poles at a
  conjugate pair, built from a state-space realization

All filters are callables ``z -> value`` so they can be handed to the grid
checks in :mod:`allpass.verify`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._exceptions import DegenerateW, NotComplexPair, PoleHit, Unstable
from .polymat import PolyMat
from .tolerances import DEFAULT

__all__ = [
    "ElementaryBlaschke",
    "SquaredBlaschke",
    "StateSpace2x2",
    "BivariateBlaschke",
    "eval_elementary",
    "squared_from_pair",
    "solve_discrete_lyapunov_2x2",
    "build_bivariate",
    "bivariate_to_polyfrac",
    "diag_embed",
]


@dataclass(frozen=True)
class ElementaryBlaschke:
    alpha: complex

    def __post_init__(self):
        if abs(abs(self.alpha) - 1.0) <= DEFAULT.unit_circle:
            raise ValueError("Blaschke factor undefined for a root on the unit circle")

    def __call__(self, z):
        return eval_elementary(self, z)


def eval_elementary(f, z, tol=1e-14):
    a = complex(f.alpha)
    if abs(z - a) <= tol * max(1.0, abs(a)):
        raise PoleHit(f"z = {z} coincides with the pole {a}")
    return (1 - a.conjugate() * z) / (z - a)


@dataclass(frozen=True)
class SquaredBlaschke:
    """``(1 - 2 a_r z + |a|^2 z^2) / (|a|^2 - 2 a_r z + z^2)``."""

    alpha_r: float
    alpha_abs2: float

    @property
    def numerator(self):
        return np.array([1.0, -2.0 * self.alpha_r, self.alpha_abs2])

    @property
    def denominator(self):
        return np.array([self.alpha_abs2, -2.0 * self.alpha_r, 1.0])

    def __call__(self, z):
        P = np.polynomial.polynomial.polyval
        den = P(z, self.denominator)
        if abs(den) == 0:
            raise PoleHit(f"z = {z} is a pole")
        return P(z, self.numerator) / den


def squared_from_pair(alpha_plus, tol=DEFAULT):
    alpha_plus = complex(alpha_plus)
    if alpha_plus.imag <= tol.real:
        raise NotComplexPair(f"{alpha_plus} is not the upper member of a complex pair")
    if abs(abs(alpha_plus) - 1.0) <= tol.unit_circle:
        raise ValueError("root on the unit circle")
    return SquaredBlaschke(alpha_plus.real, abs(alpha_plus) ** 2)


def solve_discrete_lyapunov_2x2(A, Q, tol=1e-12):
    """Solve ``P = A P A^T + Q`` for symmetric ``P`` (2 x 2, real).

    The three free entries ``(p11, p12, p22)`` of ``P`` are found from the
    corresponding 3 x 3 linear system.
    """
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if A.shape != (2, 2) or Q.shape != (2, 2):
        raise ValueError("A and Q must be 2 x 2")
    rho = np.abs(np.linalg.eigvals(A)).max()
    if rho >= 1 - tol:
        raise Unstable(f"spectral radius {rho:.6g} >= 1")
    basis = [
        np.array([[1.0, 0.0], [0.0, 0.0]]),
        np.array([[0.0, 1.0], [1.0, 0.0]]),
        np.array([[0.0, 0.0], [0.0, 1.0]]),
    ]
    idx = [(0, 0), (0, 1), (1, 1)]
    M = np.empty((3, 3))
    for k, E in enumerate(basis):
        R = E - A @ E @ A.T
        M[:, k] = [R[i, j] for i, j in idx]
    p = np.linalg.solve(M, [Q[i, j] for i, j in idx])
    return np.array([[p[0], p[1]], [p[1], p[2]]])


@dataclass(frozen=True)
class StateSpace2x2:
    """Real realization ``C (z^{-1} I - A)^{-1} B + D``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __call__(self, z):
        # D + z C (I - z A)^{-1} B, which is regular at z = 0
        return self.D + z * self.C @ np.linalg.solve(np.eye(2) - z * self.A, self.B)

    def to_json(self):
        return {k: getattr(self, k).tolist() for k in "ABCD"}


@dataclass(frozen=True)
class BivariateBlaschke:
    realization: StateSpace2x2
    alpha: complex
    w: np.ndarray

    def __call__(self, z):
        return self.realization(z)

    @property
    def poles(self):
        return np.array([self.alpha, np.conj(self.alpha)])


def _rotation_block(x):
    """``[[x_r, x_i], [-x_i, x_r]]``, whose eigenvalue for ``(1, i)`` is ``x``."""
    return np.array([[x.real, x.imag], [-x.imag, x.real]])


def _lossless_completion(A, C):
    """B, D making ``[[A, B], [C, D]]`` orthogonal in the observability-Gramian metric."""
    G = solve_discrete_lyapunov_2x2(A.T, C.T @ C)
    L = np.linalg.cholesky(G)
    Linv_T = np.linalg.inv(L).T
    top = np.vstack([L.T @ A @ Linv_T, C @ Linv_T])
    Qfull, _ = np.linalg.qr(top, mode="complete")
    comp = Qfull[:, 2:]
    return Linv_T @ comp[:2], comp[2:]


def build_bivariate(alpha_plus, w, tol=DEFAULT):
    """Real 2 x 2 all-pass with poles at ``alpha_plus`` and its conjugate.

    The residue at ``alpha_plus`` has column space ``span(w)``, so that
    ``Theta(z) B_2(z)`` stays polynomial whenever ``w`` lies in the kernel
    of ``Theta(alpha_plus)``.  The zeros sit at the reflected points
    ``1 / conj(alpha_plus)`` and ``1 / alpha_plus``.  Normalised so that
    ``B_2(1) = I``.

    The lossless completion needs a stable state matrix, so it is carried
    out in whichever variable (``z`` or ``1/z``) puts the poles inside the
    unit disc, and the realization is then rewritten in the
    ``C (z^{-1} I - A)^{-1} B + D`` form with ``A`` having eigenvalues
    ``1 / alpha_plus`` and ``1 / conj(alpha_plus)``.
    """
    alpha = complex(alpha_plus)
    w = np.asarray(w, dtype=complex).reshape(2)
    if alpha.imag <= tol.real:
        raise NotComplexPair(f"{alpha} must have a positive imaginary part")
    if abs(abs(alpha) - 1.0) <= tol.unit_circle:
        raise ValueError("root on the unit circle")
    C0 = np.column_stack([w.real, w.imag])
    if abs(np.linalg.det(C0)) <= 1e-10 * max(np.vdot(w, w).real, np.finfo(float).tiny):
        raise DegenerateW("real and imaginary parts of w are linearly dependent")

    lam = 1.0 / alpha
    if abs(alpha) > 1:
        A = _rotation_block(lam)
        B, D = _lossless_completion(A, C0)
        C = C0
    else:
        Ap = _rotation_block(alpha)
        Bp, Dp = _lossless_completion(Ap, C0)
        Ap_inv = np.linalg.inv(Ap)
        A = Ap_inv
        C = -C0 @ Ap_inv
        B = Ap_inv @ Bp
        D = Dp - C0 @ Ap_inv @ Bp

    ss = StateSpace2x2(A, B, C, D)
    H1 = ss(1.0)
    ss = StateSpace2x2(A, B @ H1.T, C, D @ H1.T)
    return BivariateBlaschke(ss, alpha, w)


def bivariate_to_polyfrac(f):
    """Split ``B_2(z) = b(z) / d(z)`` with ``d(z) = |a|^2 - 2 a_r z + z^2``.

    ``d`` is the denominator of the squared Blaschke factor of the pair, so
    the second return value is that :class:`SquaredBlaschke`; ``b`` is a
    real polynomial matrix of degree two.
    """
    ss = f.realization
    sq = squared_from_pair(f.alpha)
    A, B, C, D = ss.A, ss.B, ss.C, ss.D
    trA = np.trace(A)
    detA = np.linalg.det(A)
    s = sq.alpha_abs2
    b0 = s * D
    b1 = s * (C @ B - trA * D)
    b2 = s * (detA * D + C @ (A - trA * np.eye(2)) @ B)
    return PolyMat.from_list([b0, b1, b2], check=False), sq


def diag_embed(f, n, position=-1):
    """Wrap a scalar or 2 x 2 filter as ``diag(I, f(z), I)`` of size n."""

    def V(z):
        out = np.eye(n, dtype=complex)
        val = np.atleast_2d(f(z))
        k = val.shape[0]
        start = position % n if position >= 0 else n - k
        out[start:start + k, start:start + k] = val
        return out

    return V
