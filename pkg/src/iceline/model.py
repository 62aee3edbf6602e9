"""Finite-dimensional spectral models of the temperature--ice line system.

The zonal mean surface temperature T(y, t) obeys an energy balance

    R dT/dt = Q s(y) (1 - alpha(y, eta)) - (A + B T) + transport,

coupled to an ice line moving toward warmer or colder states,

    d(eta)/dt = eps * (T(eta, t) - T_c).

Two transport closures are supported:

* ``diffusive``:  D * d/dy[(1 - y^2) dT/dy].  Expanding T in the first
  N+1 even Legendre modes diagonalizes the transport and yields N+2 ODEs
  for (T_0, ..., T_2N, eta).  Each mode relaxes at rate
  (B + 2n(2n+1) D) / R toward f_2n(eta), a polynomial built from the
  albedo moments.
* ``relax_to_mean``:  C * (Tbar - T) with Tbar the global mean.  Here the
  temperature is expanded piecewise on each albedo band (two pieces for
  the Budyko albedo, three for the Jormungand albedo below its snow
  line), and a linear change of variables decouples all fast modes except
  the one forced by Tbar.

State vector layouts (eta always last):

* diffusive:            [T0, T2, ..., T2N, eta]
* relax, Budyko:        [u, v, T2..T2N, V2..V2N, eta]
  with u = (T0 + V0)/2, v = T0 - V0 for the open-water (U) and ice (V)
  pieces.
* relax, Jormungand:    [w, z1, z2, T2..T2N, V2..V2N, W2..W2N, eta]
  with z1 = T0 - W0, x = (T0 + W0)/2, z2 = x - V0, w = (x + V0)/2 for the
  open-water (U), bare-ice (V) and snow-ice (W) pieces.

All right-hand sides are pure functions of the state; a built model can be
shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npp

from .albedo import (
    BudykoAlbedo,
    JormungandAlbedo,
    budyko_moments,
    jormungand_moments,
)
from .insolation import s_quadratic
from .legendre import legendre_antideriv, legendre_poly, poly_eval

__all__ = [
    "DIFFUSIVE",
    "RELAX_TO_MEAN",
    "ModelParams",
    "SpectralModel",
    "build_model",
    "modern_climate_params",
    "neoproterozoic_params",
    "rhs",
    "rhs_diffusive",
    "rhs_relax_budyko",
    "rhs_relax_jormungand",
    "global_mean",
    "iceline_temperature",
    "jacobian_gap_at_sigma",
]

DIFFUSIVE = "diffusive"
RELAX_TO_MEAN = "relax_to_mean"


def _stack_polys(polys) -> np.ndarray:
    """Pad a list of coefficient arrays into one matrix (row per poly)."""
    width = max(len(p) for p in polys)
    mat = np.zeros((len(polys), width))
    for i, p in enumerate(polys):
        mat[i, : len(p)] = p
    return mat


def _powers(x: float, k: int) -> np.ndarray:
    """The vector (1, x, x^2, ..., x^(k-1))."""
    out = np.empty(k)
    out[0] = 1.0
    for i in range(1, k):
        out[i] = out[i - 1] * x
    return out


@dataclass(frozen=True)
class ModelParams:
    """Scalar constants and structural choices of one model configuration.

    Parameters
    ----------
    Q : float
        Mean annual insolation (W/m^2).
    A, B : float
        Outgoing longwave radiation A + B*T (W/m^2, W/(m^2 degC)).
    T_c : float
        Critical ice-formation temperature (degC).
    eps : float
        Ice-line response rate; small eps makes eta the slow variable.
    N : int
        Number of nonconstant even Legendre modes (N >= 1).
    albedo : BudykoAlbedo or JormungandAlbedo
    s : tuple of float
        Insolation spectral series, ``s[n]`` multiplying p_2n.  Defaults to
        the quadratic truncation (1, -0.477).
    transport : str
        ``"diffusive"`` or ``"relax_to_mean"``.
    D : float, optional
        Diffusion coefficient (W/(m^2 degC)); required iff diffusive.
    C : float, optional
        Relaxation coefficient (W/(m^2 degC)); required iff relax-to-mean.
    R : float
        Surface heat capacity; defaults to 1 so time is measured in units
        of the fast relaxation time R/B.
    """

    Q: float
    A: float
    B: float
    T_c: float
    albedo: BudykoAlbedo | JormungandAlbedo
    transport: str = DIFFUSIVE
    D: float | None = None
    C: float | None = None
    N: int = 1
    eps: float = 1e-2
    R: float = 1.0
    s: tuple = field(default_factory=lambda: tuple(s_quadratic()))

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(float(c) for c in np.atleast_1d(self.s)))
        if self.Q <= 0 or self.B <= 0 or self.R <= 0:
            raise ValueError("Q, B and R must be positive")
        if self.eps < 0:
            raise ValueError(f"eps must be >= 0, got {self.eps}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not self.s or self.s[0] <= 0:
            raise ValueError("insolation series must have s[0] > 0")
        if self.transport == DIFFUSIVE:
            if self.D is None or self.D <= 0:
                raise ValueError("diffusive transport requires D > 0")
            if self.C is not None:
                raise ValueError("C must be unset for diffusive transport")
        elif self.transport == RELAX_TO_MEAN:
            if self.C is None or self.C <= 0:
                raise ValueError("relax-to-mean transport requires C > 0")
            if self.D is not None:
                raise ValueError("D must be unset for relax-to-mean transport")
        else:
            raise ValueError(f"unknown transport {self.transport!r}")
        if not isinstance(self.albedo, (BudykoAlbedo, JormungandAlbedo)):
            raise TypeError(f"unsupported albedo {type(self.albedo).__name__}")

    @property
    def albedo_kind(self) -> str:
        return "jormungand" if isinstance(self.albedo, JormungandAlbedo) else "budyko"

    @property
    def is_diffusive(self) -> bool:
        return self.transport == DIFFUSIVE

    def with_(self, **changes) -> "ModelParams":
        """Copy with the given fields replaced."""
        return replace(self, **changes)

    def s_padded(self) -> np.ndarray:
        """Series coefficients padded with zeros up to mode N."""
        out = np.zeros(max(self.N + 1, len(self.s)))
        out[: len(self.s)] = self.s
        return out


def modern_climate_params(
    transport: str = DIFFUSIVE,
    D: float | None = 0.35,
    C: float | None = None,
    N: int = 1,
    eps: float = 1e-2,
    s=None,
) -> ModelParams:
    """Standard present-day parameter set (Budyko albedo).

    Q=343, A=202, B=1.9, alpha1=0.32, alpha2=0.62, T_c=-10.
    """
    if transport == RELAX_TO_MEAN:
        C = 3.09 if C is None else C
        D = None
    return ModelParams(
        Q=343.0, A=202.0, B=1.9, T_c=-10.0,
        albedo=BudykoAlbedo(0.32, 0.62),
        transport=transport, D=D, C=C, N=N, eps=eps,
        s=s if s is not None else s_quadratic(),
    )


def neoproterozoic_params(
    transport: str = DIFFUSIVE,
    D: float | None = 0.25,
    C: float | None = None,
    N: int = 1,
    eps: float = 1e-2,
    s=None,
    A: float = 167.0,
) -> ModelParams:
    """Deep-glaciation parameter set (Jormungand albedo, reduced Q and A).

    Q=321, B=1.9, alpha1=0.32, alpha_ice=0.36, alpha2=0.8, rho=0.35, T_c=0.
    """
    if transport == RELAX_TO_MEAN:
        C = 3.09 if C is None else C
        D = None
    return ModelParams(
        Q=321.0, A=A, B=1.9, T_c=0.0,
        albedo=JormungandAlbedo(0.32, 0.36, 0.8, 0.35),
        transport=transport, D=D, C=C, N=N, eps=eps,
        s=s if s is not None else s_quadratic(),
    )


class SpectralModel:
    """A model configuration with all polynomial machinery precomputed.

    Instances are immutable after construction and safe to share between
    threads; ``build_model`` caches them per parameter set.
    """

    def __init__(self, params: ModelParams):
        self.params = params
        N = params.N
        self._p = [legendre_poly(n) for n in range(N + 1)]
        self._P = [legendre_antideriv(n) for n in range(N + 1)]
        self._p_mat = _stack_polys(self._p)
        self._P_mat = _stack_polys(self._P)
        self._s = params.s_padded()[: N + 1]

        if params.is_diffusive:
            self._init_diffusive()
        else:
            self._init_relax()

    # -- construction ---------------------------------------------------

    def _f_polys(self, moments) -> list[np.ndarray]:
        """Critical-manifold polynomials f_2n for the diffusive variant."""
        p = self.params
        out = []
        for n, mom in enumerate(moments):
            s2n = self._s[n]
            rate = p.B + 2 * n * (2 * n + 1) * (p.D or 0.0)
            poly = npp.polyadd(
                np.array([(p.Q * s2n - (p.A if n == 0 else 0.0))]),
                -p.Q * np.asarray(mom),
            ) / rate
            out.append(poly)
        return out

    def _init_diffusive(self):
        p = self.params
        N = p.N
        self.rates = np.array(
            [(p.B + 2 * n * (2 * n + 1) * p.D) / p.R for n in range(N + 1)]
        )
        if p.albedo_kind == "jormungand":
            a_bars, b_bars = jormungand_moments(p.albedo, p.s, N)
            self.f_minus = self._f_polys(a_bars)
            self.f_plus = self._f_polys(b_bars)
        else:
            self.f_plus = self._f_polys(budyko_moments(p.albedo, p.s, N))
            self.f_minus = self.f_plus
        self._f_minus_mat = _stack_polys(self.f_minus)
        self._f_plus_mat = _stack_polys(self.f_plus)
        self.n_state = N + 2
        self.labels = [f"T{2 * n}" for n in range(N + 1)] + ["eta"]

    def _init_relax(self):
        p = self.params
        N = p.N
        L = p.Q / (p.B + p.C)
        self.L = L
        self.fast_rate = (p.B + p.C) / p.R
        alb = p.albedo
        if p.albedo_kind == "jormungand":
            self.alpha0 = 0.5 * (alb.alpha1 + alb.alpha2)
            self.gamma1 = 0.5 * (self.alpha0 + alb.alpha_ice)
            self.n_state = 3 + 3 * N + 1
            self.labels = (
                ["w", "z1", "z2"]
                + [f"T{2 * n}" for n in range(1, N + 1)]
                + [f"V{2 * n}" for n in range(1, N + 1)]
                + [f"W{2 * n}" for n in range(1, N + 1)]
                + ["eta"]
            )
        else:
            self.alpha0 = 0.5 * (alb.alpha1 + alb.alpha2)
            self.n_state = 2 + 2 * N + 1
            self.labels = (
                ["u", "v"]
                + [f"T{2 * n}" for n in range(1, N + 1)]
                + [f"V{2 * n}" for n in range(1, N + 1)]
                + ["eta"]
            )

    # -- generic helpers -------------------------------------------------

    def _p_at(self, eta: float) -> np.ndarray:
        return self._p_mat @ _powers(eta, self._p_mat.shape[1])

    def _P_at(self, eta: float) -> np.ndarray:
        return self._P_mat @ _powers(eta, self._P_mat.shape[1])

    def f_values(self, eta: float, branch: str | None = None) -> np.ndarray:
        """Fast-subsystem rest values f_2n(eta) (diffusive only).

        ``branch`` may force the eta < rho ("minus") or eta >= rho
        ("plus") moment family regardless of eta; by default the side is
        selected from eta.  Forcing the branch evaluates the smooth
        extension of one-sided dynamics across the switching boundary,
        which is what event location and the Filippov construction need.
        """
        self._require(DIFFUSIVE)
        if self._use_minus(eta, branch):
            mat = self._f_minus_mat
        else:
            mat = self._f_plus_mat
        return mat @ _powers(eta, mat.shape[1])

    def _use_minus(self, eta: float, branch: str | None) -> bool:
        if self.params.albedo_kind != "jormungand":
            return False
        if branch is None:
            return eta < self.params.albedo.rho
        if branch not in ("minus", "plus"):
            raise ValueError(f"branch must be 'minus' or 'plus', got {branch!r}")
        return branch == "minus"

    def _require(self, transport: str):
        if self.params.transport != transport:
            raise ValueError(
                f"operation requires {transport} transport, "
                f"model is {self.params.transport}"
            )

    # -- right-hand sides -------------------------------------------------

    def rhs(self, state: np.ndarray, t: float = 0.0,
            branch: str | None = None) -> np.ndarray:
        state = np.asarray(state, dtype=float)
        if state.shape != (self.n_state,):
            raise ValueError(
                f"state must have shape ({self.n_state},), got {state.shape}"
            )
        if self.params.is_diffusive:
            return self._rhs_diffusive(state, branch)
        if self.params.albedo_kind == "budyko":
            return self._rhs_relax_budyko(state)
        return self._rhs_relax_jormungand(state, branch)

    def _rhs_diffusive(self, state: np.ndarray, branch=None) -> np.ndarray:
        p = self.params
        temps, eta = state[:-1], state[-1]
        out = np.empty_like(state)
        out[:-1] = -self.rates * (temps - self.f_values(eta, branch))
        out[-1] = p.eps * (float(temps @ self._p_at(eta)) - p.T_c)
        return out

    def _rhs_relax_budyko(self, state: np.ndarray) -> np.ndarray:
        p = self.params
        alb = p.albedo
        N = p.N
        u, v = state[0], state[1]
        T = state[2 : 2 + N]
        V = state[2 + N : 2 + 2 * N]
        out = np.empty_like(state)
        tbar = self.global_mean(state)
        out[0] = (p.Q * (1 - self.alpha0) - (p.B + p.C) * u - p.A + p.C * tbar) / p.R
        out[1] = (p.Q * (alb.alpha2 - alb.alpha1) - (p.B + p.C) * v) / p.R
        s_hi = self._s[1:]
        out[2 : 2 + N] = (p.Q * s_hi * (1 - alb.alpha1) - (p.B + p.C) * T) / p.R
        out[2 + N : 2 + 2 * N] = (p.Q * s_hi * (1 - alb.alpha2) - (p.B + p.C) * V) / p.R
        out[-1] = p.eps * (self.iceline_temperature(state) - p.T_c)
        return out

    def _rhs_relax_jormungand(self, state: np.ndarray, branch=None) -> np.ndarray:
        p = self.params
        alb = p.albedo
        N = p.N
        w, z1, z2 = state[0], state[1], state[2]
        T = state[3 : 3 + N]
        V = state[3 + N : 3 + 2 * N]
        W = state[3 + 2 * N : 3 + 3 * N]
        out = np.empty_like(state)
        tbar = self.global_mean(state, branch)
        out[0] = (p.Q * (1 - self.gamma1) - p.A - (p.B + p.C) * w + p.C * tbar) / p.R
        out[1] = (p.Q * (alb.alpha2 - alb.alpha1) - (p.B + p.C) * z1) / p.R
        out[2] = (p.Q * (alb.alpha_ice - self.alpha0) - (p.B + p.C) * z2) / p.R
        s_hi = self._s[1:]
        out[3 : 3 + N] = (p.Q * s_hi * (1 - alb.alpha1) - (p.B + p.C) * T) / p.R
        out[3 + N : 3 + 2 * N] = (
            p.Q * s_hi * (1 - alb.alpha_ice) - (p.B + p.C) * V
        ) / p.R
        out[3 + 2 * N : 3 + 3 * N] = (
            p.Q * s_hi * (1 - alb.alpha2) - (p.B + p.C) * W
        ) / p.R
        out[-1] = p.eps * (self.iceline_temperature(state, branch) - p.T_c)
        return out

    # -- diagnostics -------------------------------------------------------

    def iceline_temperature(self, state: np.ndarray,
                            branch: str | None = None) -> float:
        """Temperature at the ice line, T(eta, t), driving the ice line.

        For the piecewise relaxation expansions this is the average of the
        one-sided limits at y = eta; for the Jormungand variant the value
        jumps as eta crosses the snow line (bare ice below, snow ice
        above), which is what makes the reduced flow discontinuous there.
        ``branch`` forces the eta < rho ("minus") or eta >= rho ("plus")
        expression regardless of eta.
        """
        p = self.params
        N = p.N
        eta = state[-1]
        pv = self._p_at(eta)
        if p.is_diffusive:
            return float(state[:-1] @ pv)
        if p.albedo_kind == "budyko":
            u = state[0]
            T = state[2 : 2 + N]
            V = state[2 + N : 2 + 2 * N]
            return float(u + 0.5 * (T + V) @ pv[1:])
        w, z1, z2 = state[0], state[1], state[2]
        T = state[3 : 3 + N]
        V = state[3 + N : 3 + 2 * N]
        W = state[3 + 2 * N : 3 + 3 * N]
        if self._use_minus(eta, branch):
            return float(w + 0.25 * z1 + 0.5 * (T + V) @ pv[1:])
        return float(w + 0.5 * z2 + 0.5 * (T + W) @ pv[1:])

    def iceline_rate(self, state: np.ndarray, branch: str | None = None) -> float:
        """Ice-line velocity eps * (T(eta, t) - T_c) at the given state."""
        return self.params.eps * (
            self.iceline_temperature(state, branch) - self.params.T_c
        )

    def global_mean(self, state: np.ndarray,
                    branch: str | None = None) -> float:
        """Global mean temperature Tbar = integral of T(y, t) over [0, 1].

        Continuous across the snow line (the bare-ice band has zero width
        there), so forcing ``branch`` matters only off the boundary, where
        it selects the smooth extension of one side's closed form.
        """
        p = self.params
        N = p.N
        eta = state[-1]
        if p.is_diffusive:
            return float(state[0])
        Pv = self._P_at(eta)
        if p.albedo_kind == "budyko":
            u, v = state[0], state[1]
            T = state[2 : 2 + N]
            V = state[2 + N : 2 + 2 * N]
            return float(u + v * (eta - 0.5) + (T - V) @ Pv[1:])
        w, z1, z2 = state[0], state[1], state[2]
        T = state[3 : 3 + N]
        V = state[3 + N : 3 + 2 * N]
        W = state[3 + 2 * N : 3 + 3 * N]
        rho = p.albedo.rho
        if self._use_minus(eta, branch):
            Prho = self._P_at(rho)
            return float(
                w
                + 0.5 * z1 * (eta + rho - 1.0)
                + z2 * (eta - rho + 0.5)
                + (T - V) @ Pv[1:]
                + (V - W) @ Prho[1:]
            )
        return float(w + 0.5 * z2 + z1 * (eta - 0.5) + (T - W) @ Pv[1:])

    def piece_coefficients(self, state: np.ndarray):
        """Legendre coefficients of each temperature piece, with band edges.

        Returns a list of ``(y_lo, y_hi, coeffs)`` covering [0, 1]; for the
        diffusive variant there is a single piece.
        """
        p = self.params
        N = p.N
        eta = float(state[-1])
        if p.is_diffusive:
            return [(0.0, 1.0, np.array(state[:-1]))]
        if p.albedo_kind == "budyko":
            u, v = state[0], state[1]
            T = state[2 : 2 + N]
            V = state[2 + N : 2 + 2 * N]
            Uc = np.concatenate([[u + 0.5 * v], T])
            Vc = np.concatenate([[u - 0.5 * v], V])
            return [(0.0, eta, Uc), (eta, 1.0, Vc)]
        w, z1, z2 = state[0], state[1], state[2]
        T = state[3 : 3 + N]
        V = state[3 + N : 3 + 2 * N]
        W = state[3 + 2 * N : 3 + 3 * N]
        rho = p.albedo.rho
        T0 = w + 0.5 * z2 + 0.5 * z1
        V0 = w - 0.5 * z2
        W0 = w + 0.5 * z2 - 0.5 * z1
        Uc = np.concatenate([[T0], T])
        Vc = np.concatenate([[V0], V])
        Wc = np.concatenate([[W0], W])
        if eta < rho:
            return [(0.0, eta, Uc), (eta, rho, Vc), (rho, 1.0, Wc)]
        return [(0.0, eta, Uc), (eta, 1.0, Wc)]

    def temperature_profile(self, state: np.ndarray, y):
        """Evaluate the piecewise temperature profile at y (scalar or array)."""
        pieces = self.piece_coefficients(state)
        y_arr = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.empty_like(y_arr)
        for lo, hi, coeffs in pieces:
            mask = (y_arr >= lo) & (y_arr <= hi) if hi == 1.0 else (
                (y_arr >= lo) & (y_arr < hi)
            )
            if np.any(mask):
                vals = np.zeros(int(np.count_nonzero(mask)))
                for n, c in enumerate(coeffs):
                    vals += c * poly_eval(self._p[n], y_arr[mask])
                out[mask] = vals
        return out if np.ndim(y) else float(out[0])

    def legendre_projection(self, state: np.ndarray) -> np.ndarray:
        """Global Legendre coefficients (4n+1) int_0^1 T(y) p_2n(y) dy.

        For the diffusive variant this is the temperature part of the state
        itself; for the piecewise relaxation variants it projects the
        profile, so index 0 reproduces the global mean.
        """
        p = self.params
        if p.is_diffusive:
            return np.array(state[:-1])
        pieces = self.piece_coefficients(state)
        N = p.N
        out = np.zeros(N + 1)
        for n in range(N + 1):
            acc = 0.0
            for lo, hi, coeffs in pieces:
                for m, c in enumerate(coeffs):
                    if c == 0.0:
                        continue
                    prod = npp.polyint(npp.polymul(self._p[m], self._p[n]))
                    acc += c * (poly_eval(prod, hi) - poly_eval(prod, lo))
            out[n] = (4 * n + 1) * acc
        return out

    def equilibrium_state(self, eta: float) -> np.ndarray:
        """Fast variables at rest for a frozen ice line (critical manifold).

        The returned state has all temperature-like derivatives zero; only
        the ice line itself may still move.
        """
        p = self.params
        N = p.N
        if p.is_diffusive:
            return np.concatenate([self.f_values(eta), [eta]])
        L = self.L
        alb = p.albedo
        s_hi = self._s[1:]
        if p.albedo_kind == "budyko":
            v = L * (alb.alpha2 - alb.alpha1)
            T = L * s_hi * (1 - alb.alpha1)
            V = L * s_hi * (1 - alb.alpha2)
            Pv = self._P_at(eta)
            f = (
                p.Q * (1 - self.alpha0)
                - p.A
                + p.C * (v * (eta - 0.5) + float((T - V) @ Pv[1:]))
            ) / p.B
            return np.concatenate([[f, v], T, V, [eta]])
        z1 = L * (alb.alpha2 - alb.alpha1)
        z2 = L * (alb.alpha_ice - self.alpha0)
        T = L * s_hi * (1 - alb.alpha1)
        V = L * s_hi * (1 - alb.alpha_ice)
        W = L * s_hi * (1 - alb.alpha2)
        rho = alb.rho
        Pv = self._P_at(eta)
        if eta < rho:
            Prho = self._P_at(rho)
            g = (
                0.5 * z1 * (eta + rho - 1.0)
                + z2 * (eta - rho + 0.5)
                + float((T - V) @ Pv[1:])
                + float((V - W) @ Prho[1:])
            )
        else:
            g = 0.5 * z2 + z1 * (eta - 0.5) + float((T - W) @ Pv[1:])
        w = (p.Q * (1 - self.gamma1) - p.A + p.C * g) / p.B
        return np.concatenate([[w, z1, z2], T, V, W, [eta]])

    def jacobian_gap_at_sigma(self) -> float:
        """One-sided d f_0 / d eta mismatch across the snow line.

        Only the Jormungand diffusive variant has distinct one-sided
        linearizations; the returned gap equals (Q/B)(alpha2 - alpha_ice)
        s(rho) and is positive whenever bare ice is darker than snow ice.
        """
        self._require(DIFFUSIVE)
        if self.params.albedo_kind != "jormungand":
            raise ValueError("the switching boundary exists only for the "
                             "Jormungand albedo")
        rho = self.params.albedo.rho
        dplus = poly_eval(npp.polyder(self.f_plus[0]), rho)
        dminus = poly_eval(npp.polyder(self.f_minus[0]), rho)
        return float(dplus - dminus)


@lru_cache(maxsize=64)
def build_model(params: ModelParams) -> SpectralModel:
    """Construct (and cache) the spectral machinery for a parameter set."""
    return SpectralModel(params)


def rhs(params: ModelParams, state, t: float = 0.0) -> np.ndarray:
    """Time derivative of the state for any supported variant."""
    return build_model(params).rhs(np.asarray(state, dtype=float), t)


def rhs_diffusive(params: ModelParams, state) -> np.ndarray:
    """Derivative of (T0..T2N, eta) under diffusive transport."""
    if not params.is_diffusive:
        raise ValueError("rhs_diffusive requires diffusive transport")
    return rhs(params, state)


def rhs_relax_budyko(params: ModelParams, state) -> np.ndarray:
    """Derivative of (u, v, T.., V.., eta) under relax-to-mean transport."""
    if params.is_diffusive or params.albedo_kind != "budyko":
        raise ValueError("rhs_relax_budyko requires relax transport and "
                         "Budyko albedo")
    return rhs(params, state)


def rhs_relax_jormungand(params: ModelParams, state) -> np.ndarray:
    """Derivative of (w, z1, z2, T.., V.., W.., eta) under relax transport."""
    if params.is_diffusive or params.albedo_kind != "jormungand":
        raise ValueError("rhs_relax_jormungand requires relax transport and "
                         "Jormungand albedo")
    return rhs(params, state)


def global_mean(params: ModelParams, state) -> float:
    """Global mean temperature of a state."""
    return build_model(params).global_mean(np.asarray(state, dtype=float))


def iceline_temperature(params: ModelParams, state) -> float:
    """Ice-line temperature of a state."""
    return build_model(params).iceline_temperature(np.asarray(state, dtype=float))


def jacobian_gap_at_sigma(params: ModelParams) -> float:
    """One-sided Jacobian mismatch of the glued diffusive field at eta=rho."""
    return build_model(params).jacobian_gap_at_sigma()
