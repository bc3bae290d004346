"""Enumerating fundamentalness regimes and what that costs.

A regime fixes, for every root group, whether it sits at its original
position or at the mirrored one.  Conjugate pairs flip together, so ``k``
groups give ``2**k`` regimes.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ._exceptions import RegimeExplosion
from .mirror import MirrorConfig, apply_config
from .roots import determinantal_roots, group_roots
from .tolerances import DEFAULT
from .verify import DEFAULT_GRID, verify_transform

__all__ = [
    "RegimeSet",
    "DEFAULT_REGIME_CAP",
    "all_configs",
    "regime_set",
    "enumerate_regimes",
    "count_regimes",
    "estimate_cost",
    "SECONDS_PER_YEAR",
]

DEFAULT_REGIME_CAP = 2 ** 16
SECONDS_PER_YEAR = 3600 * 24 * 365


@dataclass(frozen=True)
class RegimeSet:
    groups: list
    configs: list


def all_configs(k):
    """All ``2**k`` configurations, ordered by bitstring."""
    return [MirrorConfig(bits) for bits in itertools.product((False, True), repeat=k)]


def regime_set(P, tol=DEFAULT, cap=DEFAULT_REGIME_CAP):
    groups = group_roots(determinantal_roots(P), tol)
    if 2 ** len(groups) > cap:
        raise RegimeExplosion(f"{2 ** len(groups)} regimes exceed the cap of {cap}")
    return RegimeSet(groups, all_configs(len(groups)))


def enumerate_regimes(P, method="qr", tol=DEFAULT, cap=DEFAULT_REGIME_CAP,
                      grid=DEFAULT_GRID, workers=None):
    """Transform ``P`` into every regime and verify each result.

    Returns a list of ``(config, polymat, report)`` in bitstring order; the
    all-keep configuration maps to ``P`` itself.  ``workers > 1`` evaluates
    configurations on a thread pool.
    """
    rs = regime_set(P, tol, cap)

    def run(config):
        if not any(config.selections):
            out = P.real()
        else:
            out = apply_config(P, rs.groups, config, method, tol)
        return config, out, verify_transform(P, out, rs.groups, config, grid)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(run, rs.configs))
    return [run(c) for c in rs.configs]


def count_regimes(n, q, n_pairs=0):
    """Raw ``2**(n q)`` and pair-aware ``2**(n q - n_pairs)`` regime counts.

    Python integers are unbounded, so no saturation is needed.
    """
    if n < 1 or q < 0 or n_pairs < 0:
        raise ValueError("n >= 1, q >= 0 and n_pairs >= 0 required")
    if 2 * n_pairs > n * q:
        raise ValueError(f"{n_pairs} pairs need {2 * n_pairs} roots but only {n * q} exist")
    return 2 ** (n * q), 2 ** (n * q - n_pairs)


def estimate_cost(count, secs_per_item=1.0):
    """Total time for ``count`` items as ``(seconds, human readable string)``."""
    secs = float(count) * float(secs_per_item)
    if secs < 60:
        text = f"{secs:.6g} s"
    elif secs < 3600 * 24:
        text = f"{secs / 3600:.4g} hours"
    elif secs < SECONDS_PER_YEAR:
        text = f"{secs / 86400:.4g} days"
    else:
        text = f"≈{secs / SECONDS_PER_YEAR:.1f} years"
    return secs, text
