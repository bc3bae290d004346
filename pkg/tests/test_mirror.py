import numpy as np
import pytest

from allpass import (
    Kind,
    MirrorConfig,
    NotARoot,
    PolyMat,
    RootGroup,
    apply_config,
    determinantal_roots,
    from_gmr_form,
    group_roots,
    kernel_qr,
    max_imag,
    mirror_pair_qr,
    mirror_pair_svd,
    mirror_real_root,
    realize_via_polar,
    solve_unitary_chain,
    verify_transform,
)
from allpass._exceptions import KernelDegenerate, SpanUnsolvable
from allpass.mirror import (
    UnitaryParams,
    eval_unitary_chain,
    mirror_root,
    mirrored_groups,
    params_from_unitary,
    unitary_from_params,
)
from allpass.verify import allpass_defect, spectral_equivalence

THETA_GC = np.array([[4.0, -3.0], [5.0, 4.0]])
P_GC = from_gmr_form(THETA_GC, np.eye(2))
GROUP_GC = group_roots(determinantal_roots(P_GC))[0]
MA2 = PolyMat.scalar([1.0, -1.0, 3 / 16])


def _sorted_roots(P):
    return sorted(determinantal_roots(P), key=lambda z: (round(z.real, 8), z.imag))


def test_mirror_config():
    c = MirrorConfig.from_bitstring("0110")
    assert c.selections == (False, True, True, False)
    assert c.to_bitstring() == "0110"
    assert len(c) == 4
    assert MirrorConfig.keep_all(3).to_bitstring() == "000"
    with pytest.raises(ValueError):
        MirrorConfig.from_bitstring("012")


def test_mirror_real_root_scalar():
    P2, V = mirror_real_root(MA2, 4.0)
    assert max_imag(P2) == 0
    np.testing.assert_allclose(sorted(determinantal_roots(P2).real), [0.25, 4 / 3], atol=1e-12)
    _, d = spectral_equivalence(MA2, P2, 512)
    assert np.sqrt(d) < 1e-12
    # mirror back
    P3, _ = mirror_real_root(P2, 0.25)
    np.testing.assert_allclose(sorted(determinantal_roots(P3).real), [4 / 3, 4], atol=1e-12)
    assert np.sqrt(spectral_equivalence(MA2, P3, 512)[1]) < 1e-9
    with pytest.raises(NotARoot):
        mirror_real_root(MA2, 7.0)


def test_mirror_pair_svd_complex_intermediate():
    Pt = mirror_pair_svd(P_GC, GROUP_GC)
    assert max_imag(Pt) > 0.01
    np.testing.assert_allclose(np.abs(determinantal_roots(Pt)), [np.sqrt(31)] * 2, rtol=1e-9)
    assert np.sqrt(spectral_equivalence(P_GC, Pt, 512)[1]) < 1e-9

    P2 = realize_via_polar(Pt)
    assert max_imag(P2) < 1e-8
    np.testing.assert_allclose(_sorted_roots(P2), _sorted_roots(Pt), atol=1e-8)
    assert np.sqrt(spectral_equivalence(P_GC, P2, 512)[1]) < 1e-9


def test_separate_member_mirroring_is_complex():
    P1, _ = mirror_root(P_GC, GROUP_GC.alpha)
    assert max_imag(P1) > 1e-3


def test_realize_via_polar_on_real_input():
    P2 = realize_via_polar(P_GC)
    assert max_imag(P2) == 0 or max_imag(P2) < 1e-14
    O = np.linalg.solve(P_GC(1.0), P2(1.0))
    np.testing.assert_allclose(O @ O.T, np.eye(2), atol=1e-12)
    assert np.sqrt(spectral_equivalence(P_GC, P2, 512)[1]) < 1e-12


def test_mirror_pair_qr():
    P2 = mirror_pair_qr(P_GC, GROUP_GC)
    assert max_imag(P2) < 1e-10
    assert P2.q == P_GC.q
    np.testing.assert_allclose(np.abs(determinantal_roots(P2)), [np.sqrt(31)] * 2, rtol=1e-9)
    assert np.sqrt(spectral_equivalence(P_GC, P2, 512)[1]) < 1e-9

    P1 = realize_via_polar(mirror_pair_svd(P_GC, GROUP_GC))
    zs = np.exp(2j * np.pi * np.arange(16) / 16)
    Os = [np.linalg.solve(P2(z), P1(z)) for z in zs]
    O = Os[0]
    np.testing.assert_allclose(O @ O.T, np.eye(2), atol=1e-8)
    assert max(np.abs(X - O).max() for X in Os) < 1e-8
    assert np.abs(O.imag).max() < 1e-8


def test_mirror_pair_rejects_real_group():
    with pytest.raises(ValueError):
        mirror_pair_qr(MA2, RootGroup(Kind.REAL, 4.0))
    with pytest.raises(ValueError):
        mirror_pair_svd(MA2, RootGroup(Kind.REAL, 4.0))


def test_kernel_qr():
    kq = kernel_qr(P_GC, GROUP_GC.alpha)
    assert kq.R[0, 0] > 0 and kq.R[1, 1] > 0
    np.testing.assert_allclose(kq.Q_tilde.T @ kq.Q_tilde, np.eye(2), atol=1e-14)
    v = kq.v_r + 1j * kq.v_i
    assert np.abs(P_GC(GROUP_GC.alpha) @ v).max() < 1e-12
    # Q (R (1, i)^T) reproduces the kernel vector
    np.testing.assert_allclose(kq.Q_tilde[:, :2] @ kq.w, v, atol=1e-14)
    # real/imaginary parts made orthogonal by the phase choice
    assert abs(kq.v_r @ kq.v_i) < 1e-12


def test_kernel_qr_degenerate():
    # kernel vector (1, 1) at a complex root: real and imaginary parts parallel
    a = 0.3 + 0.4j
    d = np.polynomial.polynomial.polyfromroots([a, np.conj(a)]).real
    T = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
    diag = np.zeros((2, 2, 3))
    diag[0, 0] = d / d[0]
    diag[1, 1, 0] = 1.0
    c = np.einsum("ij,jkl,km->iml", T, diag, T.T)
    with pytest.raises(KernelDegenerate):
        kernel_qr(PolyMat(c), a)


def test_unitary_params():
    np.testing.assert_allclose(unitary_from_params(UnitaryParams()), np.eye(2))
    np.testing.assert_allclose(
        unitary_from_params(UnitaryParams(phi3=np.pi / 2)), [[0, 1], [-1, 0]], atol=1e-15)
    rng = np.random.default_rng(4)
    for _ in range(20):
        p = UnitaryParams(*rng.uniform(-np.pi, np.pi, 4))
        U = unitary_from_params(p)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(unitary_from_params(params_from_unitary(U)), U, atol=1e-12)


def test_unitary_chain():
    kq = kernel_qr(P_GC, GROUP_GC.alpha)
    params = solve_unitary_chain(kq.R, GROUP_GC.alpha)
    a = GROUP_GC.alpha
    np.testing.assert_allclose(eval_unitary_chain(params, a, 1.0), np.eye(2), atol=1e-10)
    for z in (-2, -1, -0.5, 0.5, 2):
        assert np.abs(eval_unitary_chain(params, a, z).imag).max() < 1e-9
    assert allpass_defect(lambda z: eval_unitary_chain(params, a, z), 256) < 1e-9
    # same filter as the state-space construction
    from allpass import build_bivariate

    f = build_bivariate(a, kq.w)
    for z in (0.3, -1.7, 0.2 + 0.9j):
        np.testing.assert_allclose(eval_unitary_chain(params, a, z), f(z), atol=1e-10)
    with pytest.raises(SpanUnsolvable):
        solve_unitary_chain(np.zeros((2, 2)), a)


def test_apply_config():
    g = group_roots(determinantal_roots(MA2))
    same = apply_config(MA2, g, MirrorConfig.keep_all(len(g)))
    np.testing.assert_array_equal(same.coeffs, MA2.coeffs)
    both = apply_config(MA2, g, MirrorConfig.from_bitstring("11"))
    np.testing.assert_allclose(sorted(determinantal_roots(both).real), [0.25, 0.75], atol=1e-12)

    qr = apply_config(P_GC, [GROUP_GC], MirrorConfig((True,)), "qr")
    np.testing.assert_allclose(qr.coeffs, mirror_pair_qr(P_GC, GROUP_GC).coeffs, atol=1e-12)

    with pytest.raises(ValueError):
        apply_config(MA2, g, MirrorConfig.from_bitstring("1"))
    with pytest.raises(ValueError):
        apply_config(MA2, g, MirrorConfig.from_bitstring("11"), method="lu")


@pytest.mark.parametrize("method", ["svd", "qr"])
def test_involution_gc(method):
    cfg = MirrorConfig((True,))
    P2 = apply_config(P_GC, [GROUP_GC], cfg, method)
    back = apply_config(P2, mirrored_groups([GROUP_GC], cfg), cfg, method)
    rep = verify_transform(P_GC, back, [GROUP_GC], MirrorConfig((False,)))
    assert rep.all_passed
