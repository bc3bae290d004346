"""Square matrix polynomials Theta(z) = Theta_0 + Theta_1 z + ... + Theta_q z^q.

Coefficients are stored complex-first in an ``(n, n, q + 1)`` array whose
last axis is the power of ``z``.  The degree is *declared*: a zero leading
slice is kept as is, so transformations never silently change the slot
structure of a polynomial.
"""
from __future__ import annotations

import numpy as np

from ._exceptions import (
    InterpolationIllConditioned,
    NotDivisible,
    SingularC,
    SingularLeadingTerm,
)
from .tolerances import DEFAULT

__all__ = [
    "PolyMat",
    "ScalarPoly",
    "from_gmr_form",
    "eval_polymat",
    "eval_scale",
    "spectral_density",
    "det_poly",
    "deflate_column",
    "max_imag",
    "mul",
    "mul_const",
    "is_nonsingular",
]


def is_nonsingular(M, rank_tol=DEFAULT.rank):
    """True if the smallest singular value exceeds ``rank_tol`` times the largest."""
    s = np.linalg.svd(np.atleast_2d(M), compute_uv=False)
    return s[0] > 0 and s[-1] > rank_tol * s[0]


class PolyMat:
    """An ``n x n`` polynomial matrix of declared degree ``q``.

    Parameters
    ----------
    coeffs : array_like, shape (n, n, q + 1)
        ``coeffs[:, :, j]`` multiplies ``z**j``.
    check : bool
        Verify that ``Theta_0`` is non-singular.  Intermediate products
        that are not VMA polynomials in their own right may skip this.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs, check=True, rank_tol=DEFAULT.rank):
        c = np.array(coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[0] < 1 or c.shape[2] < 1:
            raise ValueError(f"coeffs must have shape (n, n, q+1), got {c.shape}")
        if check and not is_nonsingular(c[:, :, 0], rank_tol):
            raise SingularLeadingTerm("Theta_0 is singular (condition threshold exceeded)")
        c.setflags(write=False)
        self._coeffs = c

    @classmethod
    def from_list(cls, mats, **kwargs):
        """Build from a sequence ``[Theta_0, Theta_1, ...]`` of n x n matrices."""
        mats = [np.atleast_2d(np.asarray(m, dtype=complex)) for m in mats]
        return cls(np.stack(mats, axis=-1), **kwargs)

    @classmethod
    def scalar(cls, coeffs, **kwargs):
        """A 1 x 1 polynomial from ascending scalar coefficients."""
        c = np.asarray(coeffs, dtype=complex).reshape(1, 1, -1)
        return cls(c, **kwargs)

    @classmethod
    def identity(cls, n, q=0):
        c = np.zeros((n, n, q + 1), dtype=complex)
        c[:, :, 0] = np.eye(n)
        return cls(c)

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def n(self):
        return self._coeffs.shape[0]

    @property
    def q(self):
        return self._coeffs.shape[2] - 1

    def __getitem__(self, j):
        """Coefficient matrix of ``z**j``."""
        return self._coeffs[:, :, j]

    def __call__(self, z):
        return eval_polymat(self, z)

    def __matmul__(self, other):
        if isinstance(other, PolyMat):
            return mul(self, other)
        return mul_const(self, other, side="right")

    def __rmatmul__(self, other):
        return mul_const(self, other, side="left")

    def __repr__(self):
        return f"PolyMat(n={self.n}, q={self.q})"

    def real(self):
        """Copy with imaginary parts dropped (caller is responsible for checking)."""
        return PolyMat(self._coeffs.real, check=False)

    def is_real(self, tol=DEFAULT.realness):
        return max_imag(self) <= tol

    def with_degree(self, q):
        """Pad with zero slices, or drop top slices (which must be zero) to degree ``q``."""
        c = self._coeffs
        if q >= self.q:
            pad = np.zeros((self.n, self.n, q - self.q), dtype=complex)
            return PolyMat(np.concatenate([c, pad], axis=-1), check=False)
        dropped = c[:, :, q + 1:]
        scale = max(np.abs(c).max(), 1.0)
        if np.abs(dropped).max() > DEFAULT.division * scale:
            raise ValueError("cannot drop non-zero leading coefficients")
        return PolyMat(c[:, :, : q + 1], check=False)

    # JSON: {"n", "q", "coeffs": [degree][row][col] -> {"re", "im"}}
    def to_json(self):
        out = []
        for j in range(self.q + 1):
            out.append([
                [{"re": float(x.real), "im": float(x.imag)} for x in row]
                for row in self._coeffs[:, :, j]
            ])
        return {"n": self.n, "q": self.q, "coeffs": out}

    @classmethod
    def from_json(cls, obj, **kwargs):
        n, q = int(obj["n"]), int(obj["q"])
        raw = obj["coeffs"]
        if len(raw) != q + 1:
            raise ValueError(f"expected {q + 1} coefficient slices, got {len(raw)}")
        c = np.zeros((n, n, q + 1), dtype=complex)
        for j, mat in enumerate(raw):
            if len(mat) != n or any(len(row) != n for row in mat):
                raise ValueError(f"slice {j} is not {n} x {n}")
            for r, row in enumerate(mat):
                for k, entry in enumerate(row):
                    if isinstance(entry, dict):
                        c[r, k, j] = complex(entry["re"], entry.get("im", 0.0))
                    else:
                        c[r, k, j] = complex(entry)
        return cls(c, **kwargs)


class ScalarPoly:
    """Scalar polynomial with ascending complex coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("need at least one coefficient")
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self):
        return self.coeffs.size - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def __repr__(self):
        return f"ScalarPoly({np.array2string(self.coeffs, precision=6)})"


def from_gmr_form(Theta, C, rank_tol=DEFAULT.rank):
    """The VMA(1) polynomial ``(I - Theta z) C``.

    Returns a degree-one :class:`PolyMat` with ``Theta_0 = C`` and
    ``Theta_1 = -Theta @ C``.
    """
    Theta = np.atleast_2d(np.asarray(Theta, dtype=complex))
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    if Theta.shape != C.shape or Theta.shape[0] != Theta.shape[1]:
        raise ValueError("Theta and C must be square and of equal size")
    if not is_nonsingular(C, rank_tol):
        raise SingularC("static shock transmission matrix C is singular")
    return PolyMat(np.stack([C, -Theta @ C], axis=-1), rank_tol=rank_tol)


def eval_polymat(P, z):
    """Evaluate ``P`` at a scalar ``z`` by Horner's scheme."""
    c = P.coeffs
    out = c[:, :, -1].copy()
    for j in range(P.q - 1, -1, -1):
        out = out * z + c[:, :, j]
    return out


def eval_scale(P, z):
    """``sum_k ||P_k||_2 |z|^k``, an upper bound for ``||P(z)||_2``.

    Used as the reference magnitude when deciding whether ``P(z)`` is
    singular; unlike the largest singular value of ``P(z)`` it is
    meaningful for ``1 x 1`` polynomials too.
    """
    norms = [np.linalg.norm(P.coeffs[:, :, k], 2) for k in range(P.q + 1)]
    return float(np.polynomial.polynomial.polyval(abs(z), norms))


def spectral_density(P, omega):
    """``P(e^{i omega}) P(e^{i omega})^*`` for unit-variance white noise."""
    M = eval_polymat(P, np.exp(1j * omega))
    return M @ M.conj().T


def det_poly(P, resid_tol=1e-8, trim_tol=1e-11):
    """Scalar polynomial ``det P(z)`` by interpolation on the unit circle.

    ``det P(z)`` has degree at most ``n q``; it is sampled at the ``n q + 1``
    roots of unity and the Vandermonde system is solved directly.  Leading
    coefficients below ``trim_tol`` (relative to the largest) are trimmed.
    """
    N = P.n * P.q + 1
    nodes = np.exp(2j * np.pi * np.arange(N) / N)
    values = np.array([np.linalg.det(eval_polymat(P, z)) for z in nodes])
    V = np.vander(nodes, N, increasing=True)
    coeffs = np.linalg.solve(V, values)
    scale = max(np.abs(values).max(), np.finfo(float).tiny)
    resid = np.abs(V @ coeffs - values).max()
    if resid > resid_tol * scale:
        raise InterpolationIllConditioned(f"interpolation residual {resid:.3e}")
    cmax = np.abs(coeffs).max()
    k = N
    while k > 1 and abs(coeffs[k - 1]) <= trim_tol * cmax:
        k -= 1
    return ScalarPoly(coeffs[:k])


def _divide_linear(c, alpha):
    """Divide ascending coefficients ``c`` by ``(z - alpha)``.

    Returns (quotient, remainder).  Runs top-down for ``|alpha| <= 1`` and
    bottom-up otherwise so the recursion never amplifies rounding error.
    """
    d = c.size - 1
    if d == 0:
        return np.zeros(0, dtype=complex), c[0]
    s = np.zeros(d, dtype=complex)
    if abs(alpha) <= 1:
        s[d - 1] = c[d]
        for k in range(d - 1, 0, -1):
            s[k - 1] = c[k] + alpha * s[k]
        rem = c[0] + alpha * s[0]
    else:
        s[0] = -c[0] / alpha
        for k in range(1, d):
            s[k] = (s[k - 1] - c[k]) / alpha
        rem = c[d] - s[d - 1]
    return s, rem


def deflate_column(P, col, alpha, tol=DEFAULT.division):
    """Divide every entry of column ``col`` by ``(z - alpha)``.

    The tensor shape is preserved by padding the top degree with zero.
    Returns ``(P_new, residual)`` where ``residual`` is the largest absolute
    division remainder.  Raises :class:`NotDivisible` when it exceeds
    ``tol`` relative to the column's coefficient scale.
    """
    c = np.array(P.coeffs)
    if P.q == 0:
        raise NotDivisible("a constant column has no root to divide out")
    scale = max(np.abs(c[:, col, :]).max(), np.finfo(float).tiny)
    residual = 0.0
    for r in range(P.n):
        s, rem = _divide_linear(c[r, col, :], alpha)
        residual = max(residual, abs(rem))
        c[r, col, :-1] = s
        c[r, col, -1] = 0.0
    if residual > tol * scale:
        raise NotDivisible(
            f"column {col} does not vanish at {alpha}: remainder {residual:.3e}"
        )
    return PolyMat(c, check=False), float(residual)


def max_imag(P):
    """Largest absolute imaginary part over all coefficients."""
    c = P.coeffs if isinstance(P, PolyMat) else np.asarray(P)
    return float(np.abs(np.imag(c)).max()) if c.size else 0.0


def mul(P, Q):
    """Product ``P(z) Q(z)`` as a polynomial of degree ``q_P + q_Q``."""
    if P.n != Q.n:
        raise ValueError(f"dimension mismatch: {P.n} vs {Q.n}")
    n = P.n
    out = np.zeros((n, n, P.q + Q.q + 1), dtype=complex)
    for i in range(P.q + 1):
        for j in range(Q.q + 1):
            out[:, :, i + j] += P.coeffs[:, :, i] @ Q.coeffs[:, :, j]
    return PolyMat(out, check=False)


def mul_const(P, M, side="right"):
    """``P(z) M`` (``side="right"``) or ``M P(z)`` (``side="left"``)."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.shape != (P.n, P.n):
        raise ValueError(f"constant must be {P.n} x {P.n}, got {M.shape}")
    if side == "right":
        out = np.einsum("ikj,kl->ilj", P.coeffs, M)
    elif side == "left":
        out = np.einsum("lk,kij->lij", M, P.coeffs)
    else:
        raise ValueError("side must be 'left' or 'right'")
    return PolyMat(out, check=False)
