"""Determinantal roots of a polynomial matrix and their grouping.

A real polynomial matrix has real roots and complex-conjugate pairs.  Both
kinds are the unit of mirroring: a pair is always handled through its
upper-half-plane member.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._exceptions import (
    DegenerateDeterminant,
    MultipleRoot,
    UnitCircleRoot,
    UnpairedComplexRoot,
)
from .polymat import det_poly, eval_scale
from .tolerances import DEFAULT

__all__ = [
    "Kind",
    "Location",
    "RootGroup",
    "scalar_roots",
    "determinantal_roots",
    "refine_root",
    "group_roots",
    "expand_groups",
    "sort_groups",
]


class Kind(str, Enum):
    REAL = "Real"
    COMPLEX_PAIR = "ComplexPair"


class Location(str, Enum):
    INSIDE = "Inside"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class RootGroup:
    """A real root, or a conjugate pair stored via ``alpha`` with ``alpha.imag > 0``."""

    kind: Kind
    alpha: complex

    @property
    def modulus(self):
        return abs(self.alpha)

    @property
    def argument(self):
        return float(np.angle(self.alpha))

    @property
    def location(self):
        return Location.INSIDE if self.modulus < 1 else Location.OUTSIDE

    @property
    def size(self):
        return 2 if self.kind is Kind.COMPLEX_PAIR else 1

    def members(self):
        if self.kind is Kind.COMPLEX_PAIR:
            return [self.alpha, self.alpha.conjugate()]
        return [self.alpha]

    def mirrored(self):
        """The group with ``alpha`` replaced by ``1 / conj(alpha)``."""
        a = 1.0 / np.conj(self.alpha)
        if self.kind is Kind.REAL:
            a = complex(a.real, 0.0)
        return RootGroup(self.kind, complex(a))

    def to_json(self):
        return {
            "kind": self.kind.value,
            "alpha": {"re": float(self.alpha.real), "im": float(self.alpha.imag)},
            "modulus": float(self.modulus),
            "location": self.location.value,
        }

    @classmethod
    def from_json(cls, obj):
        a = obj["alpha"]
        return cls(Kind(obj["kind"]), complex(a["re"], a.get("im", 0.0)))


def scalar_roots(p):
    """Roots of a :class:`ScalarPoly` from the eigenvalues of its companion matrix."""
    c = np.asarray(p.coeffs, dtype=complex)
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    if c[-1] == 0:
        raise DegenerateDeterminant("leading coefficient is zero")
    return np.linalg.eigvals(np.polynomial.polynomial.polycompanion(c)).astype(complex)


def determinantal_roots(P, trim_tol=1e-11):
    """All roots of ``det P(z)`` (unsorted)."""
    d = det_poly(P, trim_tol=trim_tol)
    if d.degree == 0 and abs(d.coeffs[0]) == 0:
        raise DegenerateDeterminant("det P(z) is numerically the zero polynomial")
    if np.abs(d.coeffs).max() == 0:
        raise DegenerateDeterminant("det P(z) is numerically the zero polynomial")
    return scalar_roots(d)


def refine_root(P, alpha, iters=4, max_shift=1e-4):
    """Polish a root of ``det P`` by Newton's method on ``P(alpha) v = 0``.

    Roots of the scalar determinant lose accuracy when roots cluster; the
    matrix formulation does not.  The step solves
    ``[[P(a), P'(a) v], [v0^*, 0]] [dv; da] = -[P(a) v; v0^* v - 1]``.
    The best iterate (smallest ``sigma_min`` relative to the polynomial's
    scale at the point) is returned; a
    candidate more than ``max_shift * max(1, |alpha|)`` away is rejected so
    the iteration cannot wander to a neighbouring root.  A real ``alpha``
    of a real ``P`` stays real.
    """
    c = P.coeffs
    real_case = complex(alpha).imag == 0 and np.all(c.imag == 0)
    dtype = float if real_case else complex
    c = c.real if real_case else c
    a0 = complex(alpha).real if real_case else complex(alpha)
    dc = c[:, :, 1:] * np.arange(1, c.shape[2])
    n = P.n

    def ev(coeffs, z):
        out = np.zeros((n, n), dtype=dtype)
        for k in range(coeffs.shape[2] - 1, -1, -1):
            out = out * z + coeffs[:, :, k]
        return out

    M = ev(c, a0)
    _, s, Vh = np.linalg.svd(M)
    v0 = Vh[-1].conj()
    v, a = v0.copy(), a0
    tiny = np.finfo(float).tiny
    best_ratio, best = s[-1] / max(eval_scale(P, a0), tiny), a0
    J = np.zeros((n + 1, n + 1), dtype=dtype)
    for _ in range(iters):
        M = ev(c, a)
        J[:n, :n] = M
        J[:n, n] = ev(dc, a) @ v if dc.shape[2] else 0.0
        J[n, :n] = v0.conj()
        rhs = -np.concatenate([M @ v, [v0.conj() @ v - 1]])
        try:
            d = np.linalg.solve(J, rhs)
        except np.linalg.LinAlgError:
            break
        v, a = v + d[:n], a + d[n]
        if abs(a - a0) > max_shift * max(1.0, abs(a0)):
            break
        s = np.linalg.svd(ev(c, a), compute_uv=False)
        ratio = s[-1] / max(eval_scale(P, a), tiny)
        if ratio < best_ratio:
            best_ratio, best = ratio, a
    return complex(best)


def _check_roots(roots, tol):
    for r in roots:
        if abs(abs(r) - 1.0) <= tol.unit_circle:
            raise UnitCircleRoot(f"root {r} lies on the unit circle")
    for a, b in itertools.combinations(roots, 2):
        if abs(a - b) <= tol.multiplicity * max(1.0, abs(a)):
            raise MultipleRoot(f"roots {a} and {b} coincide")


def _match_pairs(upper, lower, tol):
    """Pair upper-half roots with lower-half ones, minimising |a - conj(b)|.

    Greedy on globally sorted distances; if that leaves a bad match and there
    are at most 12 complex roots, every assignment is tried.
    """
    k = len(upper)
    if k != len(lower):
        raise UnpairedComplexRoot(
            f"{len(upper)} roots above and {len(lower)} below the real axis"
        )
    if k == 0:
        return []
    cost = np.abs(np.subtract.outer(np.asarray(upper), np.conj(lower)))
    limit = tol * max(1.0, max(abs(u) for u in upper))

    used_u, used_l, pairs = set(), set(), []
    for flat in np.argsort(cost, axis=None, kind="stable"):
        i, j = divmod(int(flat), k)
        if i not in used_u and j not in used_l:
            used_u.add(i)
            used_l.add(j)
            pairs.append((i, j))

    if max(cost[i, j] for i, j in pairs) > limit and 2 * k <= 12:
        best = min(
            itertools.permutations(range(k)),
            key=lambda perm: max(cost[i, perm[i]] for i in range(k)),
        )
        pairs = list(enumerate(best))

    worst = max(cost[i, j] for i, j in pairs)
    if worst > limit:
        raise UnpairedComplexRoot(f"conjugate matching failed (distance {worst:.3e})")
    return [(upper[i], lower[j]) for i, j in pairs]


def group_roots(roots, tol=DEFAULT):
    """Group roots into real singletons and conjugate pairs.

    Returns groups sorted by (modulus, argument), the order used to index
    configuration bitstrings.
    """
    roots = [complex(r) for r in roots]
    _check_roots(roots, tol)
    groups, upper, lower = [], [], []
    for r in roots:
        if abs(r.imag) <= tol.real * max(1.0, abs(r)):
            groups.append(RootGroup(Kind.REAL, complex(r.real, 0.0)))
        elif r.imag > 0:
            upper.append(r)
        else:
            lower.append(r)
    for u, l in _match_pairs(upper, lower, tol.pair):
        # average the two members so the stored pair is exactly conjugate
        alpha = complex(0.5 * (u.real + l.real), 0.5 * (u.imag - l.imag))
        groups.append(RootGroup(Kind.COMPLEX_PAIR, alpha))
    return sort_groups(groups)


def sort_groups(groups):
    return sorted(groups, key=lambda g: (round(g.modulus, 12), g.argument))


def expand_groups(groups):
    """Flatten groups back into the multiset of individual roots."""
    return [m for g in groups for m in g.members()]
