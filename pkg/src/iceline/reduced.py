"""Reduced slow dynamics of the ice line: eta_dot = eps * h(eta).

For small eps the fast temperature modes collapse onto an attracting
manifold over the ice-line position, and the coupled system reduces to a
single scalar ODE whose right side h is a polynomial in eta:

* diffusive transport: h(eta) = sum_n f_2n(eta) p_2n(eta) - T_c, of degree
  4N+3, with f_2n the critical-manifold temperatures;
* relax-to-mean transport: substituting the decoupled fast-mode equilibria
  gives a polynomial of degree 2N+1.

With the Jormungand albedo h comes in two branches h_minus (eta < rho) and
h_plus (eta >= rho).  They agree at rho under diffusive transport (the
glued field is continuous), while under relax-to-mean transport they do
not: the ice-line temperature jumps across the snow line, and the reduced
flow becomes a differential inclusion there.  Sliding occurs when
h_minus(rho) > 0 > h_plus(rho), i.e. both one-sided flows point at the
snow line; the admissible velocities are the convex hull of the one-sided
values, which then contains zero and pins the ice line at rho.

This module builds h, locates and classifies all of its roots in [0, 1],
and exposes the calibration helper that solves h(eta*) = 0 for the
diffusion coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npp

from .legendre import legendre_antideriv, legendre_poly, poly_eval
from .model import DIFFUSIVE, ModelParams, build_model

__all__ = [
    "STABLE",
    "UNSTABLE",
    "DEGENERATE",
    "SLIDING_AT_RHO",
    "BOUNDARY_SNOWBALL",
    "BOUNDARY_ICE_FREE",
    "Equilibrium",
    "ReducedFlow",
    "NoSolutionError",
    "DegenerateRootError",
    "build_h",
    "find_equilibria",
    "solve_D_for_target",
    "slow_manifold_temps",
    "filippov_interval",
    "has_sliding_equilibrium",
]

STABLE = "stable"
UNSTABLE = "unstable"
DEGENERATE = "degenerate"
SLIDING_AT_RHO = "sliding_at_rho"
BOUNDARY_SNOWBALL = "boundary_snowball"
BOUNDARY_ICE_FREE = "boundary_ice_free"

#: Roots are polished until |h| falls below this value.
ROOT_VALUE_TOL = 1e-12

#: |h'| below this at a root is reported as degenerate, not classified.
ROOT_DERIVATIVE_TOL = 1e-8


class NoSolutionError(RuntimeError):
    """Raised when a scalar calibration target admits no solution."""


class DegenerateRootError(RuntimeError):
    """Raised when a calibration target is insensitive to the unknown."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ReducedFlow:
    """Polynomial right side of the reduced ice-line equation.

    ``h_minus`` applies for eta < rho and ``h_plus`` for eta >= rho; for
    single-branch variants both fields hold the same polynomial and rho is
    None.  ``continuous`` records whether the two branches agree at rho.
    """

    params: ModelParams
    h_minus: np.ndarray
    h_plus: np.ndarray
    rho: float | None
    continuous: bool

    @property
    def two_branched(self) -> bool:
        return self.rho is not None

    @property
    def h(self) -> np.ndarray:
        """The single polynomial, for variants with only one branch."""
        if self.two_branched:
            raise ValueError("two-branched flow has no single polynomial; "
                             "use h_minus / h_plus")
        return self.h_plus

    def branch(self, eta: float) -> np.ndarray:
        if self.two_branched and eta < self.rho:
            return self.h_minus
        return self.h_plus

    def value(self, eta):
        """Evaluate h at eta (scalar or array), using the active branch."""
        if not self.two_branched:
            return poly_eval(self.h_plus, eta)
        eta_arr = np.asarray(eta, dtype=float)
        vals = np.where(
            eta_arr < self.rho,
            poly_eval(self.h_minus, eta_arr),
            poly_eval(self.h_plus, eta_arr),
        )
        return float(vals) if np.ndim(eta) == 0 else vals

    __call__ = value

    def derivative(self, eta: float) -> float:
        return float(poly_eval(npp.polyder(self.branch(eta)), eta))

    def degree(self) -> int:
        return max(_degree(self.h_minus), _degree(self.h_plus))


@dataclass(frozen=True)
class Equilibrium:
    """A rest point (or absorbing boundary state) of the reduced flow.

    ``temps`` holds the fast-variable values on the critical manifold at
    eta_star; ``global_mean`` is the corresponding mean temperature (equal
    to f_0(eta*) for the diffusive variants).
    """

    eta: float
    stability: str
    temps: tuple
    global_mean: float

    @property
    def is_stable(self) -> bool:
        return self.stability in (STABLE, SLIDING_AT_RHO)


def _degree(coeffs: np.ndarray) -> int:
    trimmed = npp.polytrim(np.asarray(coeffs), tol=0.0)
    return len(trimmed) - 1


def _series_terms(s: np.ndarray, polys, start: int) -> np.ndarray:
    """Polynomial sum_{n>=start} s[n] * polys[n]."""
    out = np.zeros(1)
    for n in range(start, len(s)):
        if s[n] != 0.0:
            out = npp.polyadd(out, s[n] * polys[n])
    return out


def build_h(params: ModelParams) -> ReducedFlow:
    """Assemble the reduced polynomial(s) for a parameter set.

    Exact polynomial arithmetic on the moment, Legendre, and antiderivative
    polynomials; no quadrature involved.
    """
    model = build_model(params)
    N = params.N
    p_polys = [legendre_poly(n) for n in range(N + 1)]
    P_polys = [legendre_antideriv(n) for n in range(N + 1)]
    s = params.s_padded()[: N + 1]

    if params.is_diffusive:
        def glue(f_polys):
            h = np.array([-params.T_c])
            for n in range(N + 1):
                h = npp.polyadd(h, npp.polymul(f_polys[n], p_polys[n]))
            return h

        h_minus = glue(model.f_minus)
        h_plus = glue(model.f_plus)
        if params.albedo_kind == "jormungand":
            return ReducedFlow(
                params, _frozen(h_minus), _frozen(h_plus),
                params.albedo.rho, continuous=True,
            )
        return ReducedFlow(params, _frozen(h_plus), _frozen(h_plus), None, True)

    # Relax-to-mean: substitute the decoupled fast-mode equilibria.
    alb = params.albedo
    L = params.Q / (params.B + params.C)
    alpha0 = 0.5 * (alb.alpha1 + alb.alpha2)
    sP_high = _series_terms(s, P_polys, start=1)   # sum_{n>=1} s_2n P_2n
    sp_high = _series_terms(s, p_polys, start=1)   # sum_{n>=1} s_2n p_2n

    # Budyko branch (also the eta >= rho branch of the Jormungand variant):
    # u* = f(eta) on the critical manifold, ice-line temperature
    # u* + L (1 - alpha0) sum s_2n p_2n(eta).
    inner = npp.polyadd(np.array([-0.5, 1.0]), sP_high)
    f_budyko = npp.polyadd(
        np.array([params.Q * (1 - alpha0) - params.A]),
        params.C * L * (alb.alpha2 - alb.alpha1) * inner,
    ) / params.B
    h_budyko = npp.polyadd(
        npp.polyadd(f_budyko, L * (1 - alpha0) * sp_high),
        np.array([-params.T_c]),
    )

    if params.albedo_kind == "budyko":
        return ReducedFlow(params, _frozen(h_budyko), _frozen(h_budyko), None, True)

    # Jormungand eta < rho branch: three-piece expansion.
    rho = alb.rho
    gamma1 = 0.5 * (alpha0 + alb.alpha_ice)
    gamma2 = 0.5 * (alb.alpha1 + alb.alpha_ice)
    sP_all = npp.polyadd(np.array([0.0, s[0]]), sP_high)  # sum_{n>=0} s_2n P_2n
    g_poly = npp.polyadd(
        np.array([
            -0.25 * L * (3 * alb.alpha2 - 2 * alb.alpha_ice - alb.alpha1)
            + L * (alb.alpha2 - alb.alpha_ice) * poly_eval(sP_all, rho)
        ]),
        L * (alb.alpha_ice - alb.alpha1) * sP_all,
    )
    f_minus = npp.polyadd(
        np.array([params.Q * (1 - gamma1) - params.A]), params.C * g_poly
    ) / params.B
    h_minus = npp.polyadd(
        npp.polyadd(f_minus, L * (1 - gamma2) * sp_high),
        np.array([0.25 * L * (alb.alpha2 - alb.alpha1) - params.T_c]),
    )
    return ReducedFlow(params, _frozen(h_minus), _frozen(h_budyko), rho, False)


def _refine_root(coeffs: np.ndarray, lo: float, hi: float) -> float:
    """Bisection plus Newton polish of a sign-change bracket."""
    deriv = npp.polyder(coeffs)
    flo = poly_eval(coeffs, lo)
    if flo == 0.0:
        return lo
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fmid = poly_eval(coeffs, mid)
        if fmid == 0.0 or (hi - lo) < 1e-15:
            lo = hi = mid
            break
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    for _ in range(4):
        f = poly_eval(coeffs, root)
        if abs(f) <= ROOT_VALUE_TOL:
            break
        d = poly_eval(deriv, root)
        if d == 0.0:
            break
        step = f / d
        candidate = root - step
        if not lo - 1e-12 <= candidate <= hi + 1e-12:
            break
        root = candidate
    return root


def _scan_roots(coeffs: np.ndarray, lo: float, hi: float, n_grid: int) -> list[float]:
    """All roots of a polynomial on [lo, hi] by sign scan plus refinement."""
    if hi <= lo:
        return []
    xs = np.linspace(lo, hi, n_grid)
    vs = poly_eval(coeffs, xs)
    roots = [float(x) for x, v in zip(xs, vs) if v == 0.0]
    signs = np.sign(vs)
    idx = np.nonzero((signs[:-1] * signs[1:]) < 0)[0]
    for i in idx:
        roots.append(_refine_root(coeffs, float(xs[i]), float(xs[i + 1])))
    return sorted(roots)


def find_equilibria(
    flow: ReducedFlow,
    n_grid: int = 10_000,
    include_boundaries: bool = True,
) -> list[Equilibrium]:
    """Locate and classify every rest point of the reduced flow on [0, 1].

    Interior roots are found by a sign scan on ``n_grid`` points per branch
    followed by bisection and Newton polishing; stability comes from the
    sign of the analytic derivative (|h'| < 1e-8 is reported as
    degenerate).  For the discontinuous variant a sliding (pinned) state at
    rho is added when the one-sided flows oppose, and absorbing boundary
    states are reported when the flow at an endpoint points out of the
    interval.

    Returns
    -------
    list of Equilibrium, ordered by eta.
    """
    params = flow.params
    model = build_model(params)

    def make(eta: float, stability: str) -> Equilibrium:
        state = model.equilibrium_state(eta)
        return Equilibrium(
            eta=float(eta),
            stability=stability,
            temps=tuple(float(v) for v in state[:-1]),
            global_mean=model.global_mean(state),
        )

    if flow.two_branched:
        domains = [(0.0, flow.rho, flow.h_minus), (flow.rho, 1.0, flow.h_plus)]
    else:
        domains = [(0.0, 1.0, flow.h_plus)]

    out: list[Equilibrium] = []
    seen: list[float] = []
    for lo, hi, coeffs in domains:
        for root in _scan_roots(coeffs, lo, hi, n_grid):
            if any(abs(root - r) < 1e-9 for r in seen):
                continue
            # A root located exactly at rho belongs to the h_plus domain;
            # for the discontinuous variant a one-sided zero of h_minus at
            # rho is not a rest point of the inclusion unless sliding holds
            # (handled below).
            if (
                flow.two_branched
                and not flow.continuous
                and coeffs is flow.h_minus
                and abs(root - flow.rho) < 1e-12
            ):
                continue
            seen.append(root)
            d = poly_eval(npp.polyder(coeffs), root)
            if abs(d) < ROOT_DERIVATIVE_TOL:
                stability = DEGENERATE
            else:
                stability = STABLE if d < 0 else UNSTABLE
            out.append(make(root, stability))

    if flow.two_branched and not flow.continuous and has_sliding_equilibrium(flow):
        out.append(make(flow.rho, SLIDING_AT_RHO))

    if include_boundaries:
        if flow.value(0.0) < 0.0:
            out.append(make(0.0, BOUNDARY_SNOWBALL))
        if flow.value(1.0) > 0.0:
            out.append(make(1.0, BOUNDARY_ICE_FREE))

    out.sort(key=lambda e: e.eta)
    return out


def filippov_interval(flow: ReducedFlow) -> tuple[float, float]:
    """Convex hull of the one-sided reduced velocities at eta = rho.

    The admissible velocity set of the differential inclusion at the snow
    line: [min, max] of h_minus(rho) and h_plus(rho).
    """
    if not flow.two_branched:
        raise ValueError("flow has no switching boundary")
    vminus = float(poly_eval(flow.h_minus, flow.rho))
    vplus = float(poly_eval(flow.h_plus, flow.rho))
    return (min(vminus, vplus), max(vminus, vplus))


def has_sliding_equilibrium(flow: ReducedFlow) -> bool:
    """True when the one-sided flows oppose at rho (pinned ice line)."""
    if not flow.two_branched or flow.continuous:
        return False
    vminus = float(poly_eval(flow.h_minus, flow.rho))
    vplus = float(poly_eval(flow.h_plus, flow.rho))
    return vminus > 0.0 > vplus


def slow_manifold_temps(params: ModelParams, eta: float) -> np.ndarray:
    """Critical-manifold temperature coefficients (f_0(eta), ..., f_2N(eta)).

    Diffusive variants only: these are the rest values of the fast modes
    for a frozen ice line.
    """
    if not params.is_diffusive:
        raise ValueError("slow_manifold_temps applies to diffusive variants")
    return build_model(params).f_values(eta)


def solve_D_for_target(
    params: ModelParams,
    eta_target: float,
    D_range: tuple[float, float] = (1e-3, 10.0),
    tol: float = 1e-12,
) -> float:
    """Diffusion coefficient for which eta_target is a rest point.

    Solves h(eta_target; D) = 0 by scalar root finding over ``D_range``.

    Raises
    ------
    DegenerateRootError
        If h(eta_target) does not depend on D (every D, or none, solves).
    NoSolutionError
        If h(eta_target; D) has no sign change over the range.
    """
    if not params.is_diffusive:
        raise ValueError("solve_D_for_target applies to diffusive variants")

    def g(D: float) -> float:
        return float(build_h(params.with_(D=D)).value(eta_target))

    from scipy.optimize import brentq

    samples = np.geomspace(D_range[0], D_range[1], 17)
    values = np.array([g(D) for D in samples])
    span = values.max() - values.min()
    scale = 1.0 + np.abs(values).max()
    if span < 1e-9 * scale:
        if np.abs(values).max() < 1e-8:
            raise DegenerateRootError(
                f"h({eta_target}) vanishes for every D in {D_range}: "
                "target is D-independent"
            )
        raise NoSolutionError(
            f"h({eta_target}) is insensitive to D over {D_range} and nonzero"
        )
    idx = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
    if idx.size == 0:
        raise NoSolutionError(
            f"h({eta_target}; D) has no sign change for D in {D_range}"
        )
    i = int(idx[0])
    return float(brentq(g, samples[i], samples[i + 1], xtol=tol))
