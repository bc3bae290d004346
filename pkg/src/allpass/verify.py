"""Grid checks on the unit circle and the report they feed.

``dist_herm`` is the entrywise squared distance between two spectral
densities, ``sum |S_1 - S_2|^2``; it is kept verbatim because published
regression values are expressed in it.  Defect maxima in the report use
the Frobenius norm (the square root of ``dist_herm``).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .polymat import eval_polymat, max_imag
from .roots import determinantal_roots

__all__ = [
    "DEFAULT_GRID",
    "PAPER_GRID",
    "Thresholds",
    "VerificationReport",
    "unit_circle_grid",
    "spectral_equivalence",
    "allpass_defect",
    "quotient_filter",
    "quotient_defect",
    "eval_on_grid",
    "roots_mirrored",
    "verify_transform",
]

DEFAULT_GRID = 512
PAPER_GRID = 10


def unit_circle_grid(grid):
    """``exp(2 pi i k / grid)`` for ``k = 0 .. grid-1``."""
    return np.exp(2j * np.pi * np.arange(grid) / grid)


def eval_on_grid(P, zs):
    """``P`` evaluated at every point of ``zs``, stacked as ``(len(zs), n, n)``."""
    zs = np.asarray(zs, dtype=complex)
    out = np.zeros((zs.size, P.n, P.n), dtype=complex)
    for k in range(P.q, -1, -1):
        out = out * zs[:, None, None] + P.coeffs[:, :, k]
    return out


def _gram(M):
    return M @ np.conj(np.swapaxes(M, -1, -2))


def spectral_equivalence(P, P2, grid=DEFAULT_GRID):
    """Per-point ``dist_herm`` between the spectral densities of ``P`` and ``P2``.

    Returns ``(dists, max)`` with ``dists[k]`` evaluated at
    ``exp(2 pi i k / grid)``.
    """
    if P.n != P2.n:
        raise ValueError("dimension mismatch")
    zs = unit_circle_grid(grid)
    diff = _gram(eval_on_grid(P, zs)) - _gram(eval_on_grid(P2, zs))
    dists = np.sum(np.abs(diff) ** 2, axis=(1, 2))
    return dists, float(dists.max())


def allpass_defect(V, grid=DEFAULT_GRID):
    """``max_k ||V(z_k) V(z_k)^* - I||_F`` over the unit-circle grid.

    On ``|z| = 1`` the para-Hermitian conjugate ``V^*(1/z)`` is the plain
    conjugate transpose of ``V(z)``.
    """
    worst = 0.0
    for z in unit_circle_grid(grid):
        M = np.atleast_2d(V(z))
        D = M @ M.conj().T - np.eye(M.shape[0])
        worst = max(worst, float(np.linalg.norm(D)))
    return worst


def quotient_filter(P, P2):
    """``z -> P(z)^{-1} P2(z)``, all-pass exactly when the spectral densities agree."""

    def V(z):
        return np.linalg.solve(eval_polymat(P, z), eval_polymat(P2, z))

    return V


def quotient_defect(P, P2, grid=DEFAULT_GRID):
    """:func:`allpass_defect` of :func:`quotient_filter`, evaluated in one batch."""
    zs = unit_circle_grid(grid)
    V = np.linalg.solve(eval_on_grid(P, zs), eval_on_grid(P2, zs))
    D = _gram(V) - np.eye(P.n)
    return float(np.sqrt(np.sum(np.abs(D) ** 2, axis=(1, 2))).max())


def roots_mirrored(P, P2, groups, config):
    """Match the roots expected after ``config`` against the roots of ``P2``.

    Returns a list of ``(expected, found, distance)`` triples; each found
    root is used at most once.
    """
    expected = []
    for g, flag in zip(groups, config.selections):
        members = g.mirrored().members() if flag else g.members()
        expected.extend(members)
    found = list(determinantal_roots(P2))
    out = []
    for e in expected:
        if not found:
            out.append((complex(e), complex("nan"), float("inf")))
            continue
        d = np.abs(np.asarray(found) - e)
        j = int(np.argmin(d))
        out.append((complex(e), complex(found.pop(j)), float(d[j])))
    return out


@dataclass(frozen=True)
class Thresholds:
    allpass: float = 1e-8
    spectral: float = 1e-8
    imag: float = 1e-8
    roots: float = 1e-6


@dataclass
class VerificationReport:
    grid_points: int
    max_allpass_defect: float
    max_spectral_defect: float
    max_imag: float
    root_displacements: list = field(default_factory=list)
    thresholds: Thresholds = field(default_factory=Thresholds)

    @property
    def max_root_displacement(self):
        if not self.root_displacements:
            return 0.0
        return max(d for _, _, d in self.root_displacements)

    @property
    def passed(self):
        t = self.thresholds
        return {
            "allpass": self.max_allpass_defect < t.allpass,
            "spectral": self.max_spectral_defect < t.spectral,
            "imag": self.max_imag < t.imag,
            "roots": self.max_root_displacement < t.roots,
        }

    @property
    def all_passed(self):
        return all(self.passed.values())

    def to_json(self):
        def c(x):
            return {"re": float(x.real), "im": float(x.imag)}

        return {
            "grid_points": self.grid_points,
            "max_allpass_defect": self.max_allpass_defect,
            "max_spectral_defect": self.max_spectral_defect,
            "max_imag": self.max_imag,
            "root_displacements": [
                {"expected": c(e), "found": c(f), "distance": d}
                for e, f, d in self.root_displacements
            ],
            "thresholds": asdict(self.thresholds),
            "passed": {**self.passed, "all": self.all_passed},
        }


def verify_transform(P, P2, groups=None, config=None, grid=DEFAULT_GRID,
                     thresholds=Thresholds()):
    """Run every grid check of ``P2`` against ``P`` and collect a report.

    Root displacements are only computed when ``groups`` and ``config``
    are given.
    """
    dists, _ = spectral_equivalence(P, P2, grid)
    disp = []
    if groups is not None and config is not None:
        disp = roots_mirrored(P, P2, groups, config)
    return VerificationReport(
        grid_points=grid,
        max_allpass_defect=quotient_defect(P, P2, grid),
        max_spectral_defect=float(np.sqrt(dists.max())),
        max_imag=max_imag(P2),
        root_displacements=disp,
        thresholds=thresholds,
    )
