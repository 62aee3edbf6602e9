"""Piecewise-constant albedo functions and their Legendre moments.

Two albedo profiles are supported, both depending on the ice-line position
eta (sine of latitude of the ice edge):

* ``BudykoAlbedo``: open surface (alpha1) equatorward of the ice line,
  snow-covered ice (alpha2) poleward of it.
* ``JormungandAlbedo``: as above, but ice forming equatorward of a fixed
  cutoff latitude rho is bare (no snow) and has an intermediate albedo
  alpha_ice.  For eta < rho the profile has three bands
  (alpha1 | alpha_ice | alpha2); for eta >= rho it reduces to the Budyko
  form.

The model layer never samples the albedo pointwise.  What enters the
spectral equations are the Legendre moments

    abar_2n(eta) = (4n+1) * int_0^1 alpha(y, eta) s(y) p_2n(y) dy,

which are polynomials in eta (degree 2n+3 for the quadratic insolation
truncation) and are assembled here in closed form by exact polynomial
integration of q_2n = s * p_2n.  ``moment_by_quadrature`` provides the
independent numerical oracle for those closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npp

from .legendre import legendre_poly, poly_eval, quadrature
from .insolation import series_poly

__all__ = [
    "BudykoAlbedo",
    "JormungandAlbedo",
    "pointwise_albedo",
    "budyko_moments",
    "jormungand_moments",
    "moment_by_quadrature",
]


@dataclass(frozen=True)
class BudykoAlbedo:
    """Two-band albedo: ``alpha1`` below the ice line, ``alpha2`` above."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        if not 0.0 < self.alpha1 < self.alpha2 < 1.0:
            raise ValueError(
                f"require 0 < alpha1 < alpha2 < 1, got "
                f"alpha1={self.alpha1}, alpha2={self.alpha2}"
            )


@dataclass(frozen=True)
class JormungandAlbedo:
    """Three-band albedo with a bare-ice zone equatorward of ``rho``."""

    alpha1: float
    alpha_ice: float
    alpha2: float
    rho: float

    def __post_init__(self):
        if not 0.0 < self.alpha1 < self.alpha_ice < self.alpha2 < 1.0:
            raise ValueError(
                f"require 0 < alpha1 < alpha_ice < alpha2 < 1, got "
                f"alpha1={self.alpha1}, alpha_ice={self.alpha_ice}, "
                f"alpha2={self.alpha2}"
            )
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"require 0 < rho < 1, got rho={self.rho}")


def pointwise_albedo(spec, y: float, eta: float) -> float:
    """Albedo at sine-of-latitude ``y`` for ice-line position ``eta``.

    At interior discontinuities the value is the midpoint average of the
    one-sided limits.  The moments are integrals, so this convention has no
    observable effect; it is fixed for determinism.
    """
    if not 0.0 <= y <= 1.0 or not 0.0 <= eta <= 1.0:
        raise ValueError(f"y and eta must lie in [0, 1], got y={y}, eta={eta}")
    if isinstance(spec, BudykoAlbedo):
        bands = [(eta, spec.alpha1), (1.0, spec.alpha2)]
    elif isinstance(spec, JormungandAlbedo):
        if eta < spec.rho:
            bands = [(eta, spec.alpha1), (spec.rho, spec.alpha_ice), (1.0, spec.alpha2)]
        else:
            bands = [(eta, spec.alpha1), (1.0, spec.alpha2)]
    else:
        raise TypeError(f"unsupported albedo spec {type(spec).__name__}")

    prev_edge = 0.0
    for i, (edge, value) in enumerate(bands):
        if edge <= prev_edge:  # empty band
            prev_edge = max(prev_edge, edge)
            continue
        if y < edge:
            return value
        if y == edge:
            for next_edge, next_value in bands[i + 1:]:
                if next_edge > edge:
                    return 0.5 * (value + next_value)
            return value
        prev_edge = edge
    return bands[-1][1]


@lru_cache(maxsize=None)
def _q_integral(s_key: tuple, n: int) -> np.ndarray:
    """Antiderivative (from 0) of q_2n = s * p_2n, as monomial coefficients."""
    s = np.array(s_key)
    q = npp.polymul(series_poly(s), legendre_poly(n))
    out = npp.polyint(q)
    out.flags.writeable = False
    return out


def _series_key(s) -> tuple:
    return tuple(float(c) for c in np.asarray(s, dtype=float))


def budyko_moments(spec: BudykoAlbedo, s, max_mode: int) -> list[np.ndarray]:
    """Moment polynomials abar_2n(eta) for the two-band albedo.

    Parameters
    ----------
    spec : BudykoAlbedo
    s : array_like
        Spectral series of the insolation distribution (``s[n]`` multiplies
        p_2n).
    max_mode : int
        Highest mode n.

    Returns
    -------
    list of ndarray
        ``[abar_0, ..., abar_2N]`` as monomial coefficient arrays in eta:
        abar_2n(eta) = alpha2 s_2n - (4n+1)(alpha2 - alpha1) * I_2n(eta)
        with I_2n the antiderivative of q_2n.
    """
    s = np.asarray(s, dtype=float)
    key = _series_key(s)
    out = []
    for n in range(max_mode + 1):
        s2n = s[n] if n < len(s) else 0.0
        integral = _q_integral(key, n)
        poly = npp.polyadd(
            np.array([spec.alpha2 * s2n]),
            -(4 * n + 1) * (spec.alpha2 - spec.alpha1) * integral,
        )
        out.append(poly)
    return out


def jormungand_moments(
    spec: JormungandAlbedo, s, max_mode: int
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Moment polynomial pairs for the three-band albedo.

    Returns
    -------
    (a_bars, b_bars) : tuple of lists of ndarray
        ``a_bars[n]`` applies for eta < rho,

            abar_2n(eta) = alpha2 s_2n
                - (4n+1) [ (alpha2 - alpha_ice) (I_2n(rho) - I_2n(eta))
                           + (alpha2 - alpha1) I_2n(eta) ],

        and ``b_bars[n]`` (eta >= rho) is the Budyko moment with the same
        outer albedos.  The two families agree at eta = rho.
    """
    s = np.asarray(s, dtype=float)
    key = _series_key(s)
    b_bars = budyko_moments(BudykoAlbedo(spec.alpha1, spec.alpha2), s, max_mode)
    a_bars = []
    for n in range(max_mode + 1):
        s2n = s[n] if n < len(s) else 0.0
        integral = _q_integral(key, n)
        i_rho = poly_eval(integral, spec.rho)
        const = spec.alpha2 * s2n - (4 * n + 1) * (spec.alpha2 - spec.alpha_ice) * i_rho
        poly = npp.polyadd(
            np.array([const]),
            -(4 * n + 1) * (spec.alpha_ice - spec.alpha1) * integral,
        )
        a_bars.append(poly)
    return a_bars, b_bars


def moment_by_quadrature(spec, n: int, eta: float, s, tol: float = 1e-12) -> float:
    """Numerical oracle for the moment polynomials.

    Integrates (4n+1) * alpha(y, eta) q_2n(y) over [0, 1] directly, splitting
    at the albedo discontinuities, with no polynomial closed forms involved.
    """
    q = npp.polymul(series_poly(np.asarray(s, dtype=float)), legendre_poly(n))

    def f(y):
        return poly_eval(q, y)

    breaks = {0.0, 1.0, float(eta)}
    if isinstance(spec, JormungandAlbedo) and eta < spec.rho:
        breaks.add(spec.rho)
    edges = sorted(b for b in breaks if 0.0 <= b <= 1.0)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        mid = 0.5 * (a + b)
        alb = pointwise_albedo(spec, mid, eta)
        total += alb * quadrature(f, a, b, tol=tol)
    return (4 * n + 1) * total
