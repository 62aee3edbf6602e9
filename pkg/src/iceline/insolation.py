"""Annual-mean insolation distribution over sine-of-latitude.

The distribution s(y) gives the shape of the annual-mean solar flux versus
y = sin(latitude), normalized so that its integral over [0, 1] is 1.  For a
planet with obliquity beta it has the exact integral form

    s(y) = (2/pi^2) * int_0^{2pi} sqrt(1 - (sqrt(1-y^2) sin(beta) cos(g)
                                            - y cos(beta))^2) dg,

evaluated here by adaptive quadrature in g.  Projecting onto the even
Legendre basis gives coefficients

    s_2n = (4n+1) * int_0^1 s(y) p_2n(y) dy,

which fall off quickly; the two-term truncation with s_0 = 1 and
s_2 = -0.477 is the standard default used by the model layer.
"""

from __future__ import annotations

import numpy as np

from .legendre import legendre_eval, legendre_poly, poly_eval, quadrature

__all__ = [
    "DEFAULT_OBLIQUITY_DEG",
    "s_exact",
    "s_coefficients",
    "s_quadratic",
    "series_eval",
    "series_poly",
]

#: Obliquity of Earth's spin axis (degrees) used by default.
DEFAULT_OBLIQUITY_DEG = 23.5

#: Fixed two-term coefficients of the standard quadratic truncation.
S0_QUADRATIC = 1.0
S2_QUADRATIC = -0.477


def s_exact(y: float, beta_deg: float = DEFAULT_OBLIQUITY_DEG, tol: float = 1e-11) -> float:
    """Exact insolation distribution at sine-of-latitude ``y``.

    Parameters
    ----------
    y : float
        Sine of latitude, in [0, 1].
    beta_deg : float
        Obliquity in degrees, 0 <= beta < 90.
    tol : float
        Absolute tolerance for the quadrature over the season angle.

    Returns
    -------
    float
        s(y); a dimensionless flux-shape factor of order one.
    """
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"y must lie in [0, 1], got {y}")
    if not 0.0 <= beta_deg < 90.0:
        raise ValueError(f"obliquity must lie in [0, 90) degrees, got {beta_deg}")
    beta = np.deg2rad(beta_deg)
    amp = np.sqrt(1.0 - y * y) * np.sin(beta)
    shift = y * np.cos(beta)

    def integrand(gamma):
        r = 1.0 - (amp * np.cos(gamma) - shift) ** 2
        return np.sqrt(np.clip(r, 0.0, None))

    return 2.0 / np.pi**2 * quadrature(integrand, 0.0, 2.0 * np.pi, tol=tol)


def s_coefficients(
    beta_deg: float = DEFAULT_OBLIQUITY_DEG,
    max_mode: int = 5,
    tol: float = 1e-9,
) -> np.ndarray:
    """Legendre coefficients s_2n of the exact insolation distribution.

    Parameters
    ----------
    beta_deg : float
        Obliquity in degrees.
    max_mode : int
        Highest mode index n; coefficients are returned for n = 0..max_mode.
    tol : float
        Absolute tolerance for the projection quadrature.  The pointwise
        evaluations of s(y) use a tighter tolerance so their noise floor
        stays below the projection tolerance.

    Returns
    -------
    ndarray
        Array ``s`` with ``s[n]`` the coefficient of p_2n.
    """
    if max_mode < 0:
        raise ValueError(f"max_mode must be >= 0, got {max_mode}")
    inner_tol = min(1e-11, tol * 1e-2)
    cache: dict[float, float] = {}

    def s_cached(ys: np.ndarray) -> np.ndarray:
        out = np.empty_like(ys)
        for i, y in enumerate(np.atleast_1d(ys)):
            key = float(y)
            v = cache.get(key)
            if v is None:
                v = s_exact(key, beta_deg, tol=inner_tol)
                cache[key] = v
            out[i] = v
        return out

    coeffs = np.empty(max_mode + 1)
    for n in range(max_mode + 1):
        pn = legendre_poly(n)
        val = quadrature(lambda y: s_cached(y) * poly_eval(pn, y), 0.0, 1.0, tol=tol)
        coeffs[n] = (4 * n + 1) * val
    return coeffs


def s_quadratic() -> np.ndarray:
    """The fixed two-term series {s_0 = 1, s_2 = -0.477}."""
    return np.array([S0_QUADRATIC, S2_QUADRATIC])


def series_eval(s: np.ndarray, y):
    """Evaluate a spectral series sum_n s[n] p_2n at y."""
    s = np.asarray(s, dtype=float)
    result = 0.0
    for n, c in enumerate(s):
        if c != 0.0:
            result = result + c * legendre_eval(n, y)
    return result


def series_poly(s: np.ndarray) -> np.ndarray:
    """Monomial coefficients of the polynomial sum_n s[n] p_2n(y)."""
    s = np.asarray(s, dtype=float)
    out = np.zeros(max(2 * (len(s) - 1) + 1, 1))
    for n, c in enumerate(s):
        p = legendre_poly(n)
        out[: len(p)] += c * p
    return out
