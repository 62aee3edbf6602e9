import math

import numpy as np
import pytest
from numpy.polynomial import polynomial as npp

from iceline.legendre import (
    NonConvergenceError,
    legendre_antideriv,
    legendre_eval,
    legendre_poly,
    poly_eval,
    quadrature,
)


def test_low_order_polynomials():
    assert legendre_poly(0).tolist() == [1.0]
    assert legendre_poly(1).tolist() == [-0.5, 0.0, 1.5]
    assert legendre_poly(2).tolist() == [0.375, 0.0, -3.75, 0.0, 4.375]


@pytest.mark.parametrize("n", range(8))
def test_normalization_at_one(n):
    assert legendre_eval(n, 1.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", range(8))
def test_degree(n):
    assert len(legendre_poly(n)) == 2 * n + 1
    assert legendre_poly(n)[-1] != 0.0


def test_antiderivatives():
    assert legendre_antideriv(0).tolist() == [0.0, 1.0]
    assert legendre_antideriv(1).tolist() == [0.0, -0.5, 0.0, 0.5]


@pytest.mark.parametrize("n", range(1, 8))
def test_antideriv_vanishes_at_one(n):
    assert poly_eval(legendre_antideriv(n), 1.0) == pytest.approx(0.0, abs=1e-12)


def test_antideriv_zero_at_origin_and_derivative():
    for n in range(6):
        P = legendre_antideriv(n)
        assert poly_eval(P, 0.0) == 0.0
        assert np.allclose(npp.polyder(P), legendre_poly(n), atol=1e-13)


@pytest.mark.parametrize("n", range(7))
def test_flat_at_equator(n):
    # No meridional gradient at y = 0: p_2n'(0) = 0.
    deriv = npp.polyder(legendre_poly(n))
    assert poly_eval(deriv, 0.0) == 0.0


@pytest.mark.parametrize("n", range(7))
def test_diffusion_eigenfunction_identity(n):
    # d/dy[(1 - y^2) p'] = -2n(2n+1) p, checked on 50 interior points.
    p = legendre_poly(n)
    lhs = npp.polyder(npp.polymul(np.array([1.0, 0.0, -1.0]), npp.polyder(p)))
    ys = np.linspace(0.0, 1.0, 52)[1:-1]
    expected = -2 * n * (2 * n + 1) * poly_eval(p, ys)
    scale = np.maximum(np.abs(expected), 1.0)
    assert np.max(np.abs(poly_eval(lhs, ys) - expected) / scale) < 1e-9


@pytest.mark.parametrize("m", range(7))
@pytest.mark.parametrize("n", range(7))
def test_orthogonality(m, n):
    val = quadrature(lambda y: legendre_eval(m, y) * legendre_eval(n, y),
                     0.0, 1.0, tol=1e-11)
    expected = 1.0 / (4 * n + 1) if m == n else 0.0
    assert val == pytest.approx(expected, abs=1e-9)


def test_quadrature_constant():
    assert quadrature(lambda y: np.ones_like(y), 0.0, 1.0) == pytest.approx(1.0)


def test_quadrature_smooth_reference():
    assert quadrature(np.exp, 0.0, 1.0, tol=1e-12) == pytest.approx(
        math.e - 1.0, abs=1e-11)
    assert quadrature(lambda x: np.sin(x) ** 2, 0.0, 2 * np.pi,
                      tol=1e-12) == pytest.approx(np.pi, abs=1e-11)


def test_quadrature_scalar_callable():
    # Non-vectorized integrands fall back to a scalar loop.
    assert quadrature(lambda x: math.sqrt(x), 0.25, 1.0,
                      tol=1e-10) == pytest.approx(2.0 / 3.0 - 1.0 / 12.0,
                                                  abs=1e-9)


def test_quadrature_empty_and_invalid_interval():
    assert quadrature(np.exp, 1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        quadrature(np.exp, 1.0, 0.0)


def test_quadrature_budget_exhaustion():
    with pytest.raises(NonConvergenceError):
        quadrature(lambda x: np.sqrt(np.abs(x)), -1.0, 1.0, tol=1e-16,
                   max_intervals=64)


def test_negative_mode_rejected():
    with pytest.raises(ValueError):
        legendre_poly(-1)
    with pytest.raises(ValueError):
        legendre_antideriv(-1)


def test_coefficients_read_only():
    with pytest.raises(ValueError):
        legendre_poly(2)[0] = 99.0
