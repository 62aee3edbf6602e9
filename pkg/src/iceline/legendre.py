"""Even Legendre polynomials and adaptive quadrature.

Everything downstream works with even Legendre polynomials p_2n on the
sine-of-latitude interval [0, 1], normalized so that p_2n(1) = 1.  They are
eigenfunctions of the spherical diffusion operator,

    d/dy [(1 - y^2) dp_2n/dy] = -2n(2n+1) p_2n(y),

which is what makes the spectral decomposition of the temperature equation
diagonal.  Polynomials are carried as plain monomial coefficient arrays
(lowest order first, the ``numpy.polynomial.polynomial`` convention) so they
compose with ``polyval``/``polymul``/``polyint`` directly.  Coefficients are
assembled with exact rational arithmetic and converted to float once, so the
monomial representation stays well-conditioned on [0, 1] for the mode counts
used here (n <= 10).

The module also provides the adaptive Simpson quadrature used as the
independent numerical oracle for every closed-form integral in the package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "NonConvergenceError",
    "legendre_poly",
    "legendre_antideriv",
    "legendre_eval",
    "poly_eval",
    "quadrature",
]

#: Default absolute tolerance for :func:`quadrature`.
DEFAULT_TOL = 1e-10

#: Default subdivision budget (number of intervals) for :func:`quadrature`.
DEFAULT_MAX_INTERVALS = 2**20


class NonConvergenceError(RuntimeError):
    """Raised when adaptive quadrature exhausts its subdivision budget."""


@lru_cache(maxsize=None)
def _legendre_fractions(k: int) -> tuple[Fraction, ...]:
    """Monomial coefficients of the full Legendre polynomial P_k, exact."""
    if k == 0:
        return (Fraction(1),)
    if k == 1:
        return (Fraction(0), Fraction(1))
    pm1 = _legendre_fractions(k - 1)
    pm2 = _legendre_fractions(k - 2)
    # (k) P_k = (2k-1) x P_{k-1} - (k-1) P_{k-2}
    out = [Fraction(0)] * (k + 1)
    for i, c in enumerate(pm1):
        out[i + 1] += Fraction(2 * k - 1, k) * c
    for i, c in enumerate(pm2):
        out[i] -= Fraction(k - 1, k) * c
    return tuple(out)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@lru_cache(maxsize=None)
def legendre_poly(n: int) -> np.ndarray:
    """Monomial coefficients of the even Legendre polynomial p_2n.

    Parameters
    ----------
    n : int
        Mode index; the returned polynomial has degree 2n and satisfies
        p_2n(1) = 1 and p_2n'(0) = 0.

    Returns
    -------
    ndarray
        Read-only coefficient array of length 2n + 1, lowest order first.
    """
    if n < 0:
        raise ValueError(f"mode index must be >= 0, got {n}")
    coeffs = _legendre_fractions(2 * n)
    return _readonly(np.array([float(c) for c in coeffs]))


@lru_cache(maxsize=None)
def legendre_antideriv(n: int) -> np.ndarray:
    """Monomial coefficients of P_2n(eta) = integral of p_2n from 0 to eta.

    P_0(eta) = eta, and P_2n(1) = 0 for n >= 1 (orthogonality of p_2n to
    the constant mode on [0, 1]).
    """
    if n < 0:
        raise ValueError(f"mode index must be >= 0, got {n}")
    coeffs = _legendre_fractions(2 * n)
    out = [0.0] * (2 * n + 2)
    for i, c in enumerate(coeffs):
        out[i + 1] = float(c / (i + 1))
    return _readonly(np.array(out))


def poly_eval(coeffs: np.ndarray, x):
    """Evaluate a monomial-coefficient polynomial (Horner form)."""
    return np.polynomial.polynomial.polyval(x, coeffs)


def legendre_eval(n: int, x):
    """Evaluate p_2n at x."""
    return poly_eval(legendre_poly(n), x)


def _eval_vectorized(f, x: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on an array, falling back to a scalar loop."""
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
    except (TypeError, ValueError):
        pass
    return np.array([float(f(xi)) for xi in x])


def quadrature(
    f,
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_intervals: int = DEFAULT_MAX_INTERVALS,
) -> float:
    """Adaptive composite Simpson integration of ``f`` over [a, b].

    The interval is subdivided until the standard Richardson error estimate
    on every subinterval is below ``tol`` scaled by the subinterval's share
    of [a, b], so the total absolute error is bounded by ``tol`` for
    integrands that are smooth between the sample points.  Integrands with
    known interior discontinuities should be integrated piecewise by the
    caller.

    Parameters
    ----------
    f : callable
        Real-valued integrand.  Array-valued evaluation (``f(ndarray) ->
        ndarray``) is used when available; scalar callables also work.
    a, b : float
        Integration limits, ``a <= b``.
    tol : float
        Absolute error target.
    max_intervals : int
        Subdivision budget; exceeding it raises
        :class:`NonConvergenceError`.

    Returns
    -------
    float
        The integral estimate (Richardson-extrapolated Simpson sums).
    """
    if b < a:
        raise ValueError(f"expected a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0

    span = b - a
    n0 = 8
    xs = np.linspace(a, b, 2 * n0 + 1)
    fs = _eval_vectorized(f, xs)

    # Active intervals: endpoints/midpoint abscissae and ordinates.
    left = xs[:-2:2]
    right = xs[2::2]
    fl = fs[:-2:2]
    fm = fs[1:-1:2]
    fr = fs[2::2]

    total = 0.0
    n_intervals = n0
    while left.size:
        if n_intervals > max_intervals:
            raise NonConvergenceError(
                f"quadrature did not reach tol={tol:g} within "
                f"{max_intervals} intervals"
            )
        h = right - left
        whole = (h / 6.0) * (fl + 4.0 * fm + fr)

        mid = 0.5 * (left + right)
        xq1 = 0.5 * (left + mid)
        xq2 = 0.5 * (mid + right)
        fq1 = _eval_vectorized(f, xq1)
        fq2 = _eval_vectorized(f, xq2)
        s_left = (h / 12.0) * (fl + 4.0 * fq1 + fm)
        s_right = (h / 12.0) * (fm + 4.0 * fq2 + fr)
        halves = s_left + s_right

        err = np.abs(halves - whole) / 15.0
        done = err <= tol * (h / span)
        # Converged pieces contribute their extrapolated value.
        total += float(np.sum(halves[done] + (halves[done] - whole[done]) / 15.0))

        keep = ~done
        if not np.any(keep):
            break
        # Split each unconverged interval into its two halves.
        new_left = np.concatenate([left[keep], mid[keep]])
        new_right = np.concatenate([mid[keep], right[keep]])
        new_fl = np.concatenate([fl[keep], fm[keep]])
        new_fm = np.concatenate([fq1[keep], fq2[keep]])
        new_fr = np.concatenate([fm[keep], fr[keep]])
        left, right, fl, fm, fr = new_left, new_right, new_fl, new_fm, new_fr
        n_intervals += int(np.count_nonzero(keep))

    return total
