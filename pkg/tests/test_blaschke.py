import numpy as np
import pytest

from allpass import (
    ElementaryBlaschke,
    NotComplexPair,
    PoleHit,
    SquaredBlaschke,
    build_bivariate,
    bivariate_to_polyfrac,
    diag_embed,
    squared_from_pair,
)
from allpass._exceptions import DegenerateW, Unstable
from allpass.blaschke import StateSpace2x2, solve_discrete_lyapunov_2x2
from allpass.polymat import det_poly
from allpass.verify import allpass_defect

ALPHA_GC = (4 + 1j * np.sqrt(15)) / 31


def test_elementary():
    assert ElementaryBlaschke(4)(1.0) == pytest.approx(1.0)
    assert ElementaryBlaschke(0)(2.0) == pytest.approx(0.5)
    z = np.exp(0.3j)
    assert abs(ElementaryBlaschke(2 + 1j)(z)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(PoleHit):
        ElementaryBlaschke(0.5)(0.5)
    with pytest.raises(ValueError):
        ElementaryBlaschke(1.0)


def test_squared_from_pair():
    sq = squared_from_pair(2j)
    np.testing.assert_array_equal(sq.numerator, [1, 0, 4])
    np.testing.assert_array_equal(sq.denominator, [4, 0, 1])

    sq = squared_from_pair(0.1290323 + 0.1249349j)
    assert sq.alpha_r == pytest.approx(0.1290323)
    assert sq.alpha_abs2 == pytest.approx(1 / 31, rel=1e-6)

    with pytest.raises(NotComplexPair):
        squared_from_pair(0.5)
    with pytest.raises(NotComplexPair):
        squared_from_pair(0.5 - 0.2j)


def test_squared_is_product_of_elementary_and_inverse_symmetric():
    rng = np.random.default_rng(5)
    a = 0.6 + 0.7j
    sq = squared_from_pair(a)
    b1, b2 = ElementaryBlaschke(a), ElementaryBlaschke(np.conj(a))
    zs = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    for z in zs:
        assert sq(z) == pytest.approx(b1(z) * b2(z), rel=1e-10)
        assert sq(z) * sq(1 / z) == pytest.approx(1.0, rel=1e-10)


def test_lyapunov():
    Q = np.array([[2.0, 0.3], [0.3, 1.0]])
    np.testing.assert_allclose(solve_discrete_lyapunov_2x2(np.zeros((2, 2)), Q), Q)
    np.testing.assert_allclose(
        solve_discrete_lyapunov_2x2(0.5 * np.eye(2), np.eye(2)), np.eye(2) / 0.75)
    rng = np.random.default_rng(2)
    for _ in range(20):
        A = rng.standard_normal((2, 2))
        A *= rng.uniform(0.1, 0.95) / np.abs(np.linalg.eigvals(A)).max()
        L = rng.standard_normal((2, 2))
        Q = L @ L.T
        P = solve_discrete_lyapunov_2x2(A, Q)
        assert np.abs(P - A @ P @ A.T - Q).max() < 1e-12
    with pytest.raises(Unstable):
        solve_discrete_lyapunov_2x2(1.2 * np.eye(2), np.eye(2))


@pytest.mark.parametrize("alpha", [2 + 1j, ALPHA_GC, -0.3 + 0.2j, -1.5 + 3j])
@pytest.mark.parametrize("w", [(1, 1j), (0.3 + 0.2j, -1 + 0.5j)])
def test_bivariate(alpha, w):
    w = np.array(w)
    f = build_bivariate(alpha, w)
    ss = f.realization
    # all four matrices stored as real arrays
    for M in (ss.A, ss.B, ss.C, ss.D):
        assert M.dtype == np.float64
    assert allpass_defect(f, 256) < 1e-9
    np.testing.assert_allclose(f(1.0), np.eye(2), atol=1e-12)
    # poles of z -> B_2(z): the eigenvalues of A are their reciprocals
    lam = np.linalg.eigvals(ss.A)
    np.testing.assert_allclose(sorted(1 / lam, key=np.imag), sorted(f.poles, key=np.imag), atol=1e-12)

    b, sq = bivariate_to_polyfrac(f)
    assert b.q == 2
    assert np.abs(b.coeffs.imag).max() < 1e-10
    rng = np.random.default_rng(0)
    for z in rng.standard_normal(50) + 1j * rng.standard_normal(50):
        den = np.polynomial.polynomial.polyval(z, sq.denominator)
        np.testing.assert_allclose(b(z) / den, f(z), atol=1e-10, rtol=1e-10)

    # column space of b(alpha) is span(w): annihilated by the Hermitian complement of w
    w_perp = np.array([-np.conj(w[1]), np.conj(w[0])])
    assert abs(w_perp.conj() @ b(alpha) @ np.ones(2)) < 1e-9 * max(1, np.abs(b(alpha)).max())
    assert np.linalg.matrix_rank(b(alpha), tol=1e-9 * np.abs(b.coeffs).max()) == 1
    d = det_poly(b, trim_tol=1e-14)
    # det b vanishes at the pair and at the reflected points
    for x in (alpha, np.conj(alpha), 1 / np.conj(alpha), 1 / alpha):
        assert abs(d(x)) < 1e-8 * max(1.0, np.abs(d.coeffs).max())


def test_bivariate_rejects():
    with pytest.raises(NotComplexPair):
        build_bivariate(0.5, np.array([1, 1j]))
    with pytest.raises(DegenerateW):
        build_bivariate(2 + 1j, np.array([1 + 1j, 2 + 2j]))


def test_diag_embed_elementary():
    V = diag_embed(ElementaryBlaschke(4.0), 3)
    assert allpass_defect(V, 256) < 1e-12
    V = diag_embed(squared_from_pair(0.3 + 0.6j), 2)
    assert allpass_defect(V, 256) < 1e-9
    V = diag_embed(build_bivariate(2 + 1j, np.array([1, 1j])), 4)
    M = V(0.3)
    np.testing.assert_array_equal(M[:2, :2], np.eye(2))
    assert allpass_defect(V, 256) < 1e-9


def test_statespace_json():
    ss = StateSpace2x2(*(np.eye(2) * k for k in range(4)))
    obj = ss.to_json()
    assert set(obj) == {"A", "B", "C", "D"}


def test_squared_blaschke_pole():
    with pytest.raises(PoleHit):
        SquaredBlaschke(0.0, 4.0)(2j)


def test_separate_member_footnote_identity():
    # z-coefficient of (z - conj(a))(z - 1/conj(a)): imaginary part (r - 1/r) sin(phi)
    for r, phi in [(0.4, 0.7), (2.5, 2.0), (0.9, -1.1)]:
        a = r * np.exp(1j * phi)
        coef = np.polynomial.polynomial.polyfromroots([np.conj(a), 1 / np.conj(a)])[1]
        closed = -(r * np.exp(-1j * phi) + np.exp(1j * phi) / r)
        assert abs(coef - closed) < 1e-12
        assert -coef.imag == pytest.approx((1 / r - r) * np.sin(phi), abs=1e-12)
