import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzwroof.core import (
    GhzwMixture,
    GhzwRay,
    NumericalContractError,
    WeightedEnsemble,
    density,
    eigen_residuals,
    ensemble_density,
    hermitian_eigenvalues,
    make_ghz,
    make_w,
    mixture_density,
    norm,
    overlap,
    partial_trace,
    partial_transpose_a,
    ray_of,
    superpose,
    trace_norm,
)

unit = st.floats(0.0, 1.0, allow_nan=False)
angle = st.floats(-10.0, 10.0, allow_nan=False)


def expected_rho_ab(q, t):
    """Two-qubit marginal of sqrt(q)|GHZ> - sqrt(1-q)e^{it}|W>, written out entrywise."""
    s = math.sqrt(q * (1 - q) / 6)
    em, ep = s * np.exp(-1j * t), s * np.exp(1j * t)
    d = (1 - q) / 3
    return np.array([
        [q / 2 + d, -em, -em, -ep],
        [-ep, d, d, 0],
        [-ep, d, d, 0],
        [-em, 0, 0, q / 2],
    ])


def expected_rho_ab_pt(q, t):
    s = math.sqrt(q * (1 - q) / 6)
    em, ep = s * np.exp(-1j * t), s * np.exp(1j * t)
    d = (1 - q) / 3
    return np.array([
        [q / 2 + d, -em, -ep, d],
        [-ep, d, -em, 0],
        [-em, -ep, d, 0],
        [d, 0, 0, q / 2],
    ])


def expected_rho_a(q, t):
    # off-diagonal carries the same minus sign as the two-qubit marginal
    s = math.sqrt(q * (1 - q) / 6)
    return np.array([
        [q / 2 + 2 * (1 - q) / 3, -s * np.exp(-1j * t)],
        [-s * np.exp(1j * t), q / 2 + (1 - q) / 3],
    ])


def random_hermitian(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return x + x.conj().T


# --- states ------------------------------------------------------------------


def test_ghz_amplitudes():
    psi = make_ghz()
    assert psi[0] == pytest.approx(0.7071067811865476)
    assert psi[7] == pytest.approx(0.7071067811865476)
    assert np.all(psi[1:7] == 0)
    assert norm(psi) == pytest.approx(1.0, abs=1e-15)


def test_w_amplitudes():
    psi = make_w()
    for i in (1, 2, 4):
        assert psi[i] == pytest.approx(0.5773502691896258)
    assert np.all(psi[[0, 3, 5, 6, 7]] == 0)
    assert norm(psi) == pytest.approx(1.0, abs=1e-15)
    assert overlap(make_ghz(), psi) == 0


def test_w_marginals_equal():
    rho = density(make_w())
    ra, rb, rc = (partial_trace(rho, k) for k in "abc")
    np.testing.assert_allclose(ra, rb, atol=1e-15)
    np.testing.assert_allclose(ra, rc, atol=1e-15)


def test_superpose_endpoints():
    np.testing.assert_allclose(superpose(GhzwRay(1.0, 0.3)), make_ghz(), atol=1e-15)
    np.testing.assert_allclose(superpose(GhzwRay(0.0, 0.0)), -make_w(), atol=1e-15)


def test_superpose_half():
    psi = superpose(GhzwRay(0.5, 0.0))
    # sqrt(0.5)/sqrt(2) and -sqrt(0.5)/sqrt(3)
    assert psi[0] == pytest.approx(0.5) and psi[7] == pytest.approx(0.5)
    for i in (1, 2, 4):
        assert psi[i].real == pytest.approx(-0.40824829046386296)
    assert np.all(psi[[3, 5, 6]] == 0)


@given(unit, angle)
def test_superpose_unit_norm(q, t):
    assert norm(superpose(GhzwRay(q, t))) == pytest.approx(1.0, abs=1e-12)


def test_ray_validation():
    assert GhzwRay(1.0 + 5e-13).q == 1.0
    assert GhzwRay(-5e-13).q == 0.0
    with pytest.raises(ValueError):
        GhzwRay(1.1)
    with pytest.raises(ValueError):
        GhzwRay(0.5, math.inf)
    assert GhzwRay(0.5, -2 * math.pi / 3).theta == pytest.approx(4 * math.pi / 3)
    assert 0 <= GhzwRay(0.5, 2 * math.pi).theta < 2 * math.pi


@given(st.floats(1e-6, 1 - 1e-6), angle, st.floats(0, 2 * math.pi))
def test_ray_of_roundtrip(q, t, phase):
    ray = GhzwRay(q, t)
    back = ray_of(np.exp(1j * phase) * superpose(ray))
    assert back.q == pytest.approx(q, abs=1e-12)
    assert abs(np.exp(1j * back.theta) - np.exp(1j * ray.theta)) < 1e-9


def test_ray_of_rejects_states_off_the_plane():
    psi = np.zeros(8, complex)
    psi[3] = 1
    with pytest.raises(ValueError):
        ray_of(psi)


# --- density matrices ------------------------------------------------------


def test_density_of_ghz():
    rho = density(make_ghz())
    for i, j in ((0, 0), (0, 7), (7, 0), (7, 7)):
        assert rho[i, j] == pytest.approx(0.5)
    assert np.count_nonzero(rho) == 4


@given(unit, angle)
@settings(max_examples=30)
def test_density_is_rank_one_projector(q, t):
    rho = density(superpose(GhzwRay(q, t)))
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    w = hermitian_eigenvalues(rho)
    np.testing.assert_allclose(w, [0] * 7 + [1], atol=1e-12)


def test_density_requires_unit_norm():
    with pytest.raises(ValueError):
        density(2 * make_ghz())


def test_mixture_density():
    np.testing.assert_allclose(mixture_density(1.0), density(make_ghz()), atol=1e-15)
    np.testing.assert_allclose(mixture_density(GhzwMixture(0.0)), density(make_w()), atol=1e-15)
    w = hermitian_eigenvalues(mixture_density(0.5))
    np.testing.assert_allclose(w, [0] * 6 + [0.5, 0.5], atol=1e-12)
    with pytest.raises(ValueError):
        GhzwMixture(1.5)


# --- partial trace and transpose -------------------------------------------


@pytest.mark.parametrize("q,t", [(0.3, 0.0), (0.5, 0.4), (0.77, 2.9), (0.01, 5.5)])
def test_partial_trace_matches_written_marginals(q, t):
    rho = density(superpose(GhzwRay(q, t)))
    np.testing.assert_allclose(partial_trace(rho, {"a", "b"}), expected_rho_ab(q, t), atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, "a"), expected_rho_a(q, t), atol=1e-12)


def test_partial_trace_ghz_single_qubit():
    np.testing.assert_allclose(partial_trace(density(make_ghz()), "a"), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_rejects_bad_keep():
    rho = density(make_ghz())
    for bad in ("", "abc", "d", "ad"):
        with pytest.raises(ValueError):
            partial_trace(rho, bad)


@given(unit, angle)
@settings(max_examples=40)
def test_marginal_symmetry(q, t):
    rho = density(superpose(GhzwRay(q, t)))
    ab, bc, ac = (partial_trace(rho, k) for k in ("ab", "bc", "ac"))
    np.testing.assert_allclose(ab, bc, atol=1e-12)
    np.testing.assert_allclose(ab, ac, atol=1e-12)
    for m in (ab, partial_trace(rho, "b")):
        assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)
        assert hermitian_eigenvalues(m).min() >= -1e-12


@pytest.mark.parametrize("q,t", [(0.3, 0.0), (0.5, 0.4), (0.9, 4.0)])
def test_partial_transpose_matches_written_matrix(q, t):
    m = partial_transpose_a(expected_rho_ab(q, t))
    np.testing.assert_allclose(m, expected_rho_ab_pt(q, t), atol=1e-12)


def test_partial_transpose_index_rule():
    m = np.arange(16).reshape(4, 4)
    out = partial_transpose_a(m)
    for i, j, k, l in np.ndindex(2, 2, 2, 2):
        assert out[2 * i + j, 2 * k + l] == m[2 * k + j, 2 * i + l]


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30)
def test_partial_transpose_involution_and_trace(seed):
    m = random_hermitian(np.random.default_rng(seed), 4)
    t = partial_transpose_a(m)
    np.testing.assert_array_equal(partial_transpose_a(t), m)
    assert abs(np.trace(t) - np.trace(m)) <= 1e-14
    np.testing.assert_allclose(t, t.conj().T, atol=1e-14)


def test_partial_transpose_keeps_diagonal():
    d = np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex)
    np.testing.assert_array_equal(partial_transpose_a(d), d)


# --- eigensolver and trace norm --------------------------------------------


def test_eigenvalues_diag():
    np.testing.assert_allclose(hermitian_eigenvalues(np.diag([0.8, 0.2])), [0.2, 0.8], atol=1e-15)


def test_eigenvalues_of_w_partial_transpose_exact():
    pt0 = expected_rho_ab_pt(0.0, 0.0).real
    exact = sp.Matrix(4, 4, [sp.nsimplify(x, [sp.Rational(1, 3)]) for x in pt0.ravel()]).eigenvals()
    exact = sorted(float(k) for k, mult in exact.items() for _ in range(mult))
    got = hermitian_eigenvalues(partial_transpose_a(partial_trace(density(make_w()), "ab")))
    np.testing.assert_allclose(got, exact, atol=1e-14)
    assert got[0] == pytest.approx((1 - math.sqrt(5)) / 6, abs=1e-14)
    assert got[0] == pytest.approx(-0.2060113, abs=1e-7)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_eigen_contract_random(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        m = random_hermitian(rng, n)
        trace_err, resid = eigen_residuals(m)
        assert trace_err <= 1e-10 and resid <= 1e-10
        np.testing.assert_allclose(hermitian_eigenvalues(m), np.linalg.eigvalsh(m), atol=1e-10)


def test_eigen_rejects_non_hermitian():
    with pytest.raises(NumericalContractError):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_trace_norm():
    assert trace_norm(mixture_density(0.3)) == pytest.approx(1.0, abs=1e-12)
    assert trace_norm(np.diag([0.5, -0.5])) == pytest.approx(1.0)
    w_pt = partial_transpose_a(partial_trace(density(make_w()), "ab"))
    # 2/3 + sqrt5/3
    assert trace_norm(w_pt) == pytest.approx(1.4120226591665967, abs=1e-12)
    assert trace_norm(w_pt) >= abs(np.trace(w_pt))


# --- ensembles ---------------------------------------------------------------


def test_ensemble_validation():
    r = GhzwRay(0.5)
    with pytest.raises(ValueError):
        WeightedEnsemble(((0.5, r), (0.4, r)))
    with pytest.raises(ValueError):
        WeightedEnsemble(((1.2, r), (-0.2, r)))
    with pytest.raises(ValueError):
        WeightedEnsemble(tuple((0.2, r) for _ in range(5)))


def test_single_entry_ensemble():
    r = GhzwRay(0.4, 1.3)
    np.testing.assert_allclose(ensemble_density(WeightedEnsemble(((1.0, r),))), density(superpose(r)), atol=1e-15)


@given(unit, angle)
@settings(max_examples=30)
def test_phase_triple_reconstructs_mixture(p, t):
    e = WeightedEnsemble(tuple((1 / 3, GhzwRay(p, t + k * 2 * math.pi / 3)) for k in range(3)))
    np.testing.assert_allclose(ensemble_density(e), mixture_density(p), atol=1e-10)
