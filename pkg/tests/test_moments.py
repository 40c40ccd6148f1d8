import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steerlab.errors import DegenerateMomentError
from steerlab.moments import (MomentTable, QuadratureSetting, correlation, default_settings,
                              inference_error, inferred_variance, moment_table, optimal_gain,
                              rotated_quadrature, sum_std, sum_variance)
from steerlab.quadrature import default_box, integrate4
from steerlab.states import TMSV, LaguerreGauss, PhotonSubtracted

HP = math.pi / 2
RS = [0.1, 0.3, 0.5, 0.8]


def quad(desc):
    return moment_table(desc, "quadrature")


def test_rotated_quadrature():
    assert rotated_quadrature((1, 0, 0, 0), "bob", 0.0) == 1
    assert rotated_quadrature((1, 0, 0, 0), "bob", HP) == pytest.approx(0, abs=1e-16)
    assert rotated_quadrature((1, 1, 0, 0), "bob", math.pi / 4) == pytest.approx(math.sqrt(2))
    assert rotated_quadrature((0, 0, 2, 3), "alice", HP) == pytest.approx(3)


@settings(max_examples=50, deadline=None)
@given(t=st.floats(0, 2 * math.pi), p=st.floats(0, 2 * math.pi))
def test_vacuum_uncorrelated(t, p):
    assert correlation(TMSV(0.0), t, p) == 0.0


def test_tmsv_correlation_by_quadrature():
    assert correlation(TMSV(0.5), 0.0, 0.0, method="quadrature") == pytest.approx(math.tanh(1.0), abs=1e-3)


def test_lg_correlation_against_direct_integrals():
    d = LaguerreGauss(0, 1)
    box = default_box(d)
    w = d.wigner
    xpy = integrate4(lambda X, PX, Y, PY: X * PY * w(X, PX, Y, PY), box)
    x2 = integrate4(lambda X, PX, Y, PY: X * X * w(X, PX, Y, PY), box)
    py2 = integrate4(lambda X, PX, Y, PY: PY * PY * w(X, PX, Y, PY), box)
    assert correlation(d, 0.0, HP, method="quadrature") == pytest.approx(xpy / math.sqrt(x2 * py2), abs=1e-9)
    assert correlation(d, 0.0, HP) == pytest.approx(-0.5)


@settings(max_examples=40, deadline=None)
@given(r=st.floats(0, 1.5), t=st.floats(0, 2 * math.pi), p=st.floats(0, 2 * math.pi))
def test_tmsv_inferred_variance_formula(r, t, p):
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    expected = 0.5 * c - 0.5 * math.tanh(2 * r) * s * math.cos(t + p) ** 2
    assert inferred_variance(TMSV(r), t, p) == pytest.approx(expected, abs=1e-12)


def test_tmsv_inferred_variance_quadrature():
    v = inferred_variance(quad(TMSV(0.5)), 0.0, 0.0)
    assert v == pytest.approx(1 / (2 * math.cosh(1.0)), abs=1e-4)


@pytest.mark.parametrize("r", RS + [0.4])
def test_photon_subtracted_inferred_variances(r):
    t = quad(PhotonSubtracted(r))
    ch = math.cosh(r) * math.sinh(r)
    assert inferred_variance(t, 0.0, 0.0) == pytest.approx(3 / (4 * (math.cosh(2 * r) - ch)), abs=1e-4)
    assert inferred_variance(t, HP, HP) == pytest.approx(3 / (4 * (math.cosh(2 * r) + ch)), abs=1e-4)


@pytest.mark.parametrize("r", RS)
def test_tmsv_sum_bound(r):
    assert sum_variance(quad(TMSV(r)), 0.0, HP) == pytest.approx(math.sqrt(2 * math.cosh(2 * r)), abs=1e-4)


def test_vacuum_sum_bound():
    assert sum_variance(TMSV(0.0), 0.0, HP) == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("r", RS)
def test_photon_subtracted_sum_bound_uses_cosh(r):
    t = quad(PhotonSubtracted(r))
    c, ch = math.cosh(2 * r), math.cosh(r) * math.sinh(r)
    printed_cosh = math.sqrt(c - ch) + math.sqrt(c + ch)
    assert sum_variance(t, 0.0, HP) == pytest.approx(printed_cosh, abs=1e-4)
    # the standard deviation of the summed observable is a different quantity
    assert sum_std(t, 0.0, HP) == pytest.approx(math.sqrt(2 * c), abs=1e-4)


def test_photon_subtracted_printed_cos_variant_does_not_match():
    r = 0.6
    c = math.cosh(2 * r)
    printed_cos = math.sqrt(c - math.cos(r) * math.sinh(r)) + math.sqrt(c + math.cos(r) * math.sinh(r))
    assert abs(sum_variance(quad(PhotonSubtracted(r)), 0.0, HP) - printed_cos) > 1e-2


@pytest.mark.parametrize("desc", [TMSV(r) for r in RS] + [PhotonSubtracted(r) for r in RS]
                         + [LaguerreGauss(0, n) for n in range(1, 6)])
def test_closed_forms_match_quadrature(desc):
    a, q = moment_table(desc), quad(desc)
    np.testing.assert_allclose(q.second, a.second, atol=1e-4)
    s = default_settings(desc)
    for theta, phi in s.pairs:
        assert inferred_variance(q, theta, phi) == pytest.approx(inferred_variance(a, theta, phi), abs=1e-4)
    assert sum_variance(q, s.theta1, s.theta2) == pytest.approx(sum_variance(a, s.theta1, s.theta2), abs=1e-4)


@pytest.mark.parametrize("desc", [TMSV(0.5), PhotonSubtracted(0.3), LaguerreGauss(0, 3), LaguerreGauss(2, 1)])
def test_gain_is_a_minimum(desc):
    for theta, phi in default_settings(desc).pairs:
        g = optimal_gain(desc, theta, phi)
        best = inference_error(desc, theta, phi, g)
        assert best == pytest.approx(inferred_variance(desc, theta, phi), abs=1e-12)
        for f in (0.99, 1.01):
            assert inference_error(desc, theta, phi, g * f) >= best


@settings(max_examples=60, deadline=None)
@given(family=st.sampled_from(["tmsv", "psub", "lg"]), x=st.floats(0, 1.2), n=st.integers(0, 6),
       t=st.floats(0, 2 * math.pi), p=st.floats(0, 2 * math.pi))
def test_inferred_not_above_unconditioned(family, x, n, t, p):
    desc = {"tmsv": TMSV(x), "psub": PhotonSubtracted(x), "lg": LaguerreGauss(n % 3, n)}[family]
    table = moment_table(desc)
    assert inferred_variance(table, t, p) <= table.var_bob(t) + 1e-9


@settings(max_examples=60, deadline=None)
@given(family=st.sampled_from(["tmsv", "psub", "lg"]), x=st.floats(0, 1.2), n=st.integers(0, 6),
       t1=st.floats(0, 2 * math.pi), t2=st.floats(0, 2 * math.pi))
def test_sum_std_triangle(family, x, n, t1, t2):
    desc = {"tmsv": TMSV(x), "psub": PhotonSubtracted(x), "lg": LaguerreGauss(n % 3, n)}[family]
    assert sum_std(desc, t1, t2) <= sum_variance(desc, t1, t2) + 1e-9


def test_degenerate_moment():
    t = MomentTable(np.zeros(4), np.zeros((4, 4)), "analytic")
    with pytest.raises(DegenerateMomentError):
        correlation(t, 0.0, 0.0)
    with pytest.raises(DegenerateMomentError):
        optimal_gain(t, 0.0, 0.0)


def test_default_settings_pairing():
    assert default_settings(TMSV(0.2)) == QuadratureSetting(0.0, HP, 0.0, HP)
    lg = default_settings(LaguerreGauss(0, 2))
    assert (lg.theta1, lg.phi1, lg.theta2, lg.phi2) == (0.0, HP, HP, 0.0)


def test_lg_correlation_squared_variant_matches_printed_reid():
    # 1 / (4 Dinf^2 X Dinf^2 PX) at n = 1 is printed as 0.4444
    d = LaguerreGauss(0, 1)
    prod_sq = inferred_variance(d, 0.0, HP) * inferred_variance(d, HP, 0.0)
    t = moment_table(d)
    c1, c2 = correlation(t, 0.0, HP), correlation(t, HP, 0.0)
    prod_lin = t.var_bob(0.0) * (1 - abs(c1)) * t.var_bob(HP) * (1 - abs(c2))
    assert 1 / (4 * prod_sq) == pytest.approx(0.4444, abs=1e-4)
    assert 1 / (4 * prod_lin) == pytest.approx(1.0)
