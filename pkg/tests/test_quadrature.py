import math

import numpy as np
import pytest

from smeargas.errors import QuadratureError
from smeargas.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, integrate_1d, integrate_2d


def test_rule_matches_legendre_gauss_nodes():
    x, w = np.polynomial.legendre.leggauss(7)
    np.testing.assert_allclose(NODES[1::2], x, atol=1e-15)
    np.testing.assert_allclose(GAUSS_WEIGHTS[1::2], w, atol=1e-15)
    assert np.all(GAUSS_WEIGHTS[0::2] == 0)


@pytest.mark.parametrize("degree", range(0, 23))
def test_kronrod_exact_to_degree_22(degree):
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert np.dot(KRONROD_WEIGHTS, NODES ** degree) == pytest.approx(exact, abs=1e-14)


def test_gauss_exact_to_degree_13_and_not_beyond():
    for degree in range(14):
        exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
        assert np.dot(GAUSS_WEIGHTS, NODES ** degree) == pytest.approx(exact, abs=1e-14)
    assert abs(np.dot(GAUSS_WEIGHTS, NODES ** 14) - 2.0 / 15) > 1e-8


def test_integrate_1d_gaussian_tail():
    val, err = integrate_1d(lambda x: np.exp(-x * x), 0.0, 10.0, rel_tol=1e-13)
    assert val == pytest.approx(0.5 * math.sqrt(math.pi) * math.erf(10.0), rel=1e-13)
    assert err < 1e-12


def test_integrate_1d_breakpoints_find_narrow_spike():
    f = lambda x: np.exp(-0.5 * ((x - 0.3127) / 1e-5) ** 2)
    exact = 1e-5 * math.sqrt(2 * math.pi)
    pts = [0.3127 + k * 1e-5 for k in (-16, -8, -4, -2, -1, 0, 1, 2, 4, 8, 16)]
    val, _ = integrate_1d(f, 0.0, 1.0, abs_tol=1e-18, rel_tol=1e-10, points=pts)
    assert val == pytest.approx(exact, rel=1e-9)


def test_integrate_1d_spike_on_panel_edge_is_missed_without_breakpoints():
    # documents why callers must place breakpoints around narrow features
    f = lambda x: np.exp(-0.5 * ((x - 0.3127) / 1e-5) ** 2)
    val, _ = integrate_1d(f, 0.0, 1.0, abs_tol=1e-18, rel_tol=1e-10, points=[0.3127])
    assert val == 0.0


def test_integrate_1d_budget_exhaustion_raises():
    with pytest.raises(QuadratureError):
        integrate_1d(lambda x: np.sign(x - 0.1234567), 0.0, 1.0, abs_tol=1e-15,
                     rel_tol=0.0, max_panels=20)


def test_integrate_2d_separable_polynomial():
    val, _ = integrate_2d(lambda x, y: x ** 3 * y ** 2 + 1.0, (0.0, 2.0), (-1.0, 1.0), 1e-13)
    assert val == pytest.approx(4.0 * 2.0 / 3.0 + 4.0, rel=1e-14)


def test_integrate_2d_offcenter_gaussian():
    f = lambda x, y: np.exp(-0.5 * ((x - 1.3) ** 2 + (y + 0.4) ** 2)) / (2 * math.pi)
    val, err = integrate_2d(f, (-3.0, 2.0), (-1.0, 4.0), 1e-12)
    ex = 0.5 * (math.erf((2.0 - 1.3) / math.sqrt(2)) - math.erf((-3.0 - 1.3) / math.sqrt(2)))
    ey = 0.5 * (math.erf((4.0 + 0.4) / math.sqrt(2)) - math.erf((-1.0 + 0.4) / math.sqrt(2)))
    assert abs(val - ex * ey) < 1e-12
    assert err <= 1e-12


def test_integrate_2d_budget_exhaustion_raises():
    step = lambda x, y: (x + y > 0.123).astype(float)
    with pytest.raises(QuadratureError):
        integrate_2d(step, (-1.0, 1.0), (-1.0, 1.0), 1e-14, max_panels=200)
