import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzwroof.core import GhzwRay, NumericalContractError, WeightedEnsemble
from ghzwroof.measures import W_VALUES, MeasureKind, measure_pure, tangle_closed, tangle_signed
from ghzwroof.roof import (
    PHASES,
    TANGLE_Q_STAR0,
    TANGLE_Q_STAR1,
    CriticalPoints,
    DomainError,
    RoofBranches,
    branch_derivative,
    branch_derivative_fd,
    branch_derivative_q_scaled,
    build_decomposition,
    e_opt3,
    e_opt40,
    e_opt41,
    ensemble_value,
    find_critical_points,
    golden_section,
    kink_points,
    mixed_closed,
    pi_mixed_closed,
    roof_branches,
    roof_evaluate,
    roof_value,
    tangle_mixed_closed,
    triple_spread,
    verify_decomposition,
)
from ghzwroof.checks import check_gradients, gradient_samples, run_checks

KINDS = list(MeasureKind)


# --- analytic constants ----------------------------------------------------


def test_tangle_critical_constants():
    c = 2 ** (1 / 3)
    assert TANGLE_Q_STAR0 == pytest.approx(4 * c / (3 + 4 * c), abs=1e-15)
    assert TANGLE_Q_STAR0 == pytest.approx(0.6268510, abs=1e-7)
    assert TANGLE_Q_STAR1 == pytest.approx(0.7086825, abs=1e-7)
    # q*0 is the zero of the tangle on the theta = 0 line
    assert tangle_closed(GhzwRay(TANGLE_Q_STAR0)) == pytest.approx(0.0, abs=1e-14)


def test_tangle_kink_is_the_tangle_zero():
    (k,) = kink_points(MeasureKind.TANGLE)
    assert k == pytest.approx(TANGLE_Q_STAR0, abs=1e-12)
    assert kink_points(MeasureKind.PI) == ()
    assert tangle_signed(k - 1e-6) < 0 < tangle_signed(k + 1e-6)


@pytest.mark.parametrize("kind", KINDS)
def test_critical_points_independent_of_reference_p(kind):
    a = find_critical_points(kind, 0.1, 0.1)
    b = find_critical_points(kind, 0.3, 0.3)
    assert abs(a.q_star0 - b.q_star0) <= 1e-9
    assert abs(a.q_star1 - b.q_star1) <= 1e-9
    assert a.theta_star == 0.0


def test_critical_points_values():
    t = find_critical_points("tangle")
    assert t.q_star0 == pytest.approx(TANGLE_Q_STAR0, abs=1e-8)
    assert t.q_star1 == pytest.approx(TANGLE_Q_STAR1, abs=1e-8)
    p = find_critical_points("pi")
    assert p.q_star0 == pytest.approx(0.5639425, abs=1e-6)
    assert p.q_star1 == pytest.approx(0.9633153, abs=1e-6)


@pytest.mark.parametrize("kind", KINDS)
def test_critical_points_are_stationary(kind):
    cp = find_critical_points(kind)
    if kind is MeasureKind.PI:
        assert branch_derivative(kind, 0.3, cp.q_star0, 40) == pytest.approx(0.0, abs=1e-7)
    assert branch_derivative(kind, 0.9, cp.q_star1, 41) == pytest.approx(0.0, abs=1e-7)


def test_critical_points_order_enforced():
    with pytest.raises(NumericalContractError):
        CriticalPoints(0.8, 0.7, 0.0, MeasureKind.TANGLE)
    with pytest.raises(ValueError):
        find_critical_points("tangle", 0.0, 0.3)


# --- branches --------------------------------------------------------------


def test_opt3_frozen_value():
    # 0.65^2 - 8/9 sqrt(6 * 0.65 * 0.35^3)
    assert e_opt3("tangle", 0.65) == pytest.approx(abs(0.4225 - 8 / 9 * math.sqrt(6 * 0.65 * 0.35**3)), abs=1e-14)
    assert e_opt3("tangle", 0.65) == pytest.approx(0.059018888, abs=1e-9)


def test_branch_windows():
    with pytest.raises(DomainError):
        e_opt40("tangle", 0.7, 0.6)
    with pytest.raises(DomainError):
        e_opt41("tangle", 0.5, 0.6)
    with pytest.raises(DomainError):
        e_opt40("pi", 0.3, 1.0)
    assert e_opt40("pi", 0.0, 0.5) == pytest.approx(W_VALUES[MeasureKind.PI], abs=1e-15)
    assert e_opt41("pi", 1.0, 0.5) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("kind", KINDS)
def test_branches_meet_at_critical_points(kind):
    cp = find_critical_points(kind)
    assert e_opt40(kind, cp.q_star0, cp.q_star0) == pytest.approx(e_opt3(kind, cp.q_star0), abs=1e-14)
    assert e_opt41(kind, cp.q_star1, cp.q_star1) == pytest.approx(e_opt3(kind, cp.q_star1), abs=1e-14)


def test_roof_branch_availability():
    b = roof_branches("tangle", 0.5)
    assert b.e_opt40 is not None and b.e_opt41 is None
    b = roof_branches("tangle", 0.68)
    assert b.e_opt40 is None and b.e_opt41 is None
    b = roof_branches("tangle", 0.9)
    assert b.e_opt40 is None and b.e_opt41 is not None


def test_best_prefers_simpler_on_ties():
    assert RoofBranches(0.5, 0.5 - 1e-14).best() == (0.5, "opt3")
    assert RoofBranches(0.5, 0.4).best() == (0.4, "opt40")
    assert RoofBranches(0.5, None, 0.3).best() == (0.3, "opt41")


@pytest.mark.parametrize(
    "kind,p,label",
    [("tangle", 0.0, "opt3"), ("tangle", 0.5, "opt40"), ("tangle", 0.68, "opt3"), ("tangle", 0.9, "opt41"),
     ("pi", 0.3, "opt40"), ("pi", 0.564, "opt3"), ("pi", 0.8, "opt3"), ("pi", 0.99, "opt41")],
)
def test_roof_labels(kind, p, label):
    assert roof_evaluate(kind, p)[1] == label


def test_endpoint_roof_values():
    for kind in KINDS:
        assert roof_value(kind, 1.0) == pytest.approx(1.0, abs=1e-12)
        assert roof_value(kind, 0.0) == pytest.approx(W_VALUES[kind], abs=1e-12)


def test_p_validation():
    with pytest.raises(ValueError):
        roof_value("pi", 1.2)
    with pytest.raises(ValueError):
        mixed_closed("tangle", -0.1)


# --- closed-form curves ----------------------------------------------------


def test_tangle_mixed_frozen_values():
    assert tangle_mixed_closed(0.5) == pytest.approx(0.0, abs=1e-15)
    assert tangle_mixed_closed(0.65) == pytest.approx(0.059018888360731325, abs=1e-14)
    assert tangle_mixed_closed(0.8) == pytest.approx(0.4604015705239132, abs=1e-12)


def test_pi_mixed_frozen_values():
    assert pi_mixed_closed(0.3) == pytest.approx(0.5236531781171514, abs=1e-10)
    assert pi_mixed_closed(0.8) == pytest.approx(0.6294449290415776, abs=1e-10)


@pytest.mark.parametrize("kind", KINDS)
def test_closed_forms_agree_with_roof(kind):
    for p in np.linspace(0, 1, 101):
        assert mixed_closed(kind, p) == pytest.approx(roof_value(kind, p), abs=1e-9)


@pytest.mark.parametrize("kind", KINDS)
def test_closed_forms_are_convex_and_below_pure(kind):
    ps = np.linspace(0, 1, 401)
    e = np.array([mixed_closed(kind, p) for p in ps])
    assert np.all(np.diff(e, 2) >= -1e-9)
    pure = np.array([measure_pure(kind, GhzwRay(p)) for p in ps])
    assert np.all(e <= pure + 1e-12)


def test_tangle_curve_monotone_and_below_pi():
    ps = np.linspace(0, 1, 1001)
    tau = np.array([tangle_mixed_closed(p) for p in ps])
    pi = np.array([pi_mixed_closed(p) for p in ps])
    assert np.all(np.diff(tau) >= -1e-12)
    assert np.all(pi >= tau - 1e-12)


def test_pi_curve_has_interior_minimum():
    ps = np.linspace(0, 1, 1001)
    pi = np.array([pi_mixed_closed(p) for p in ps])
    i = int(np.argmin(pi))
    assert 0 < i < len(ps) - 1
    # the minimum sits inside the opt3 window, past q*0
    cp = find_critical_points("pi")
    assert cp.q_star0 < ps[i] < cp.q_star1
    p_min = golden_section(pi_mixed_closed, ps[i - 1], ps[i + 1])
    assert p_min == pytest.approx(0.5827, abs=1e-3)
    assert pi_mixed_closed(p_min) == pytest.approx(0.500224, abs=1e-5)


# --- derivatives -----------------------------------------------------------


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("which", [40, 41])
def test_branch_derivative_matches_fd(kind, which):
    for p, q in gradient_samples(kind, which):
        a = branch_derivative(kind, p, q, which)
        fd = branch_derivative_fd(kind, p, q, which)
        assert abs(a - fd) <= 1e-5 * max(abs(a), abs(fd))


def test_gradient_check_catches_q_scaled_derivative():
    assert check_gradients().passed
    bad = check_gradients(derivative=branch_derivative_q_scaled)
    assert not bad.passed


def test_branch_derivative_rejects_unknown_branch():
    with pytest.raises(ValueError):
        branch_derivative("pi", 0.3, 0.5, 3)


# --- decompositions --------------------------------------------------------


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.6, 0.68, 0.8, 0.95, 1.0])
def test_decomposition_reconstructs_and_realises_roof(kind, p):
    e = build_decomposition(kind, p)
    assert verify_decomposition(e, p) <= 1e-10
    assert triple_spread(e, kind) <= 1e-10
    assert ensemble_value(e, kind) == pytest.approx(roof_value(kind, p), abs=1e-12)
    assert 3 <= len(e) <= 4


@given(st.floats(0.0, 1.0))
@settings(max_examples=40, deadline=None)
def test_decomposition_property(p):
    for kind in KINDS:
        assert verify_decomposition(build_decomposition(kind, p), p) <= 1e-10


def test_decomposition_phases():
    e = build_decomposition("tangle", 0.68)
    assert [r.theta for r in e.rays] == pytest.approx(list(PHASES))
    e = build_decomposition("tangle", 0.3)
    assert e.rays[-1].q == 0.0 and e.weights[-1] == pytest.approx(1 - 0.3 / TANGLE_Q_STAR0)


def test_perturbed_weights_break_reconstruction():
    e = build_decomposition("tangle", 0.5)
    w = list(e.weights)
    w[0] += 0.01
    w[-1] -= 0.01
    bad = WeightedEnsemble(tuple(zip(w, e.rays)))
    assert verify_decomposition(bad, 0.5) > 1e-4


# --- golden section ---------------------------------------------------------


def test_golden_section_quadratic():
    x = golden_section(lambda t: (t - 0.3217) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3217, abs=1e-9)


def test_verify_checks_all_pass():
    assert all(r.passed for r in run_checks())
