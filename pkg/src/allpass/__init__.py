"""All-pass (Blaschke) transformations of real matrix polynomials.

Mirror any subset of the determinantal roots of a VMA polynomial
``Theta(z)`` across the unit circle while keeping the spectral density
and, for jointly mirrored conjugate pairs, real coefficients.
"""
from ._exceptions import *  # noqa: F401,F403
from .blaschke import (
    BivariateBlaschke,
    ElementaryBlaschke,
    SquaredBlaschke,
    StateSpace2x2,
    bivariate_to_polyfrac,
    build_bivariate,
    diag_embed,
    squared_from_pair,
)
from .mirror import (
    MirrorConfig,
    apply_config,
    kernel_qr,
    mirror_pair_qr,
    mirror_pair_svd,
    mirror_real_root,
    mirror_root,
    mirrored_groups,
    realize_via_polar,
    solve_unitary_chain,
)
from .polymat import PolyMat, ScalarPoly, det_poly, from_gmr_form, max_imag
from .regimes import count_regimes, enumerate_regimes, estimate_cost, regime_set
from .roots import Kind, Location, RootGroup, determinantal_roots, group_roots
from .tolerances import DEFAULT, Tolerances
from .verify import (
    Thresholds,
    VerificationReport,
    allpass_defect,
    spectral_equivalence,
    verify_transform,
)

__version__ = "0.1.0"
