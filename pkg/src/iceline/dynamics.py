"""Time integration of the coupled temperature--ice line systems.

Free motion is integrated with an embedded adaptive Runge--Kutta 4(5)
scheme (``scipy.integrate.solve_ivp``); the diffusive variants default to
an operator-splitting stepper whose fast stage advances each temperature
mode with its exact exponential update (the modes are decoupled affine
ODEs for a frozen ice line), which keeps large steps stable when the ice
line is made very slow.

Around the Jormungand snow line eta = rho the vector field changes branch,
so each free segment integrates the smooth extension of the *current*
branch and stops at an exact eta = rho event; integrating the glued field
directly would make the error control chatter against the kink.  At the
boundary the one-sided ice-line velocities decide what happens next:

* same sign: the trajectory crosses, and integration resumes on the other
  branch (for the diffusive variant the glued field is continuous and the
  crossing is merely logged);
* opposing signs (relax-to-mean variant only): Filippov sliding; the ice
  line is pinned at rho while the fast variables keep evolving (their
  field is single-valued on the boundary), until both one-sided
  velocities agree in sign again.

The domain ends eta = 0 (snowball) and eta = 1 (ice free) clamp the ice
line under outward flow, fast variables continuing, with release if the
flow turns inward.  Optional equilibrium detection stops a run once the
right side is uniformly small.

``integrate_reduced`` applies the same logic to the scalar reduced flow
eta_dot = eps*h(eta), and ``fenichel_check`` measures how far trajectories
settle from the critical manifold as eps shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .legendre import poly_eval
from .model import ModelParams, SpectralModel, build_model
from .reduced import ReducedFlow

__all__ = [
    "IntegratorOpts",
    "TrajectoryEvent",
    "Trajectory",
    "StepFailureError",
    "integrate",
    "integrate_reduced",
    "fenichel_check",
    "FenichelReport",
]

_NUDGE = 1e-12


class StepFailureError(RuntimeError):
    """Raised when the step size underflows; carries the last valid state."""

    def __init__(self, message: str, t: float, state: np.ndarray):
        super().__init__(message)
        self.t = t
        self.state = state


@dataclass
class IntegratorOpts:
    """Integration options.

    Parameters
    ----------
    t_end : float
        Time horizon.
    rtol, atol : float
        Local error tolerances.
    max_step : float
        Upper bound on the step size.
    event_tol : float
        Tolerance (in the event function value) for locating crossings
        with the splitting stepper; the RK engine locates events to solver
        precision.
    equilibrium_tol : float, optional
        Stop once the sup norm of the right side falls below this.
    method : str
        ``"auto"`` (splitting for diffusive variants, RK otherwise),
        ``"rk45"`` or ``"splitting"``.
    sample_dt : float, optional
        Uniform output sampling; by default the accepted solver steps are
        returned.
    """

    t_end: float
    rtol: float = 1e-9
    atol: float = 1e-9
    max_step: float = np.inf
    event_tol: float = 1e-10
    equilibrium_tol: float | None = None
    method: str = "auto"
    sample_dt: float | None = None

    def __post_init__(self):
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.rtol <= 0 or self.atol <= 0 or self.event_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.method not in ("auto", "rk45", "splitting"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class TrajectoryEvent:
    t: float
    label: str
    detail: str = ""


@dataclass
class Trajectory:
    """Sampled solution with its event log.

    ``status`` records how the run ended: ``"t_end"``, ``"equilibrium"``,
    ``"boundary_snowball"``, ``"boundary_ice_free"`` or
    ``"sliding_at_rho"`` (the latter three meaning the ice line was pinned
    there when the run stopped).
    """

    t: np.ndarray
    states: np.ndarray
    labels: list[str]
    events: list[TrajectoryEvent] = field(default_factory=list)
    status: str = "t_end"

    @property
    def eta(self) -> np.ndarray:
        return self.states[:, -1]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def final_eta(self) -> float:
        return float(self.states[-1, -1])


def _rho_of(params: ModelParams) -> float | None:
    if params.albedo_kind == "jormungand":
        return params.albedo.rho
    return None


def _resample(t: np.ndarray, states: np.ndarray, dt: float):
    """Linear resampling of accepted steps onto a uniform grid."""
    if len(t) < 2:
        return t, states
    t_unique, idx = np.unique(t, return_index=True)
    states = states[idx]
    grid = np.arange(t_unique[0], t_unique[-1], dt)
    grid = np.append(grid, t_unique[-1])
    out = np.column_stack(
        [np.interp(grid, t_unique, states[:, j])
         for j in range(states.shape[1])]
    )
    return grid, out


def _side_of(eta: float, rho: float | None) -> str | None:
    if rho is None:
        return None
    return "minus" if eta < rho else "plus"


# ---------------------------------------------------------------------------
# free-motion engines (single branch, interrupted by events)
# ---------------------------------------------------------------------------


class _FreeEvents:
    """Scalar monitor functions that interrupt free motion."""

    def __init__(self, model: SpectralModel, opts: IntegratorOpts,
                 branch: str | None):
        self.model = model
        self.opts = opts
        self.branch = branch
        self.rho = _rho_of(model.params)
        self.names = ["snowball", "icefree"]
        if self.rho is not None:
            self.names.append("sigma")
        if opts.equilibrium_tol is not None:
            self.names.append("equilibrium")

    def g(self, name: str, y: np.ndarray) -> float:
        if name == "snowball":
            return float(y[-1])
        if name == "icefree":
            return float(y[-1] - 1.0)
        if name == "sigma":
            return float(y[-1] - self.rho)
        if name == "equilibrium":
            return float(
                np.max(np.abs(self.model.rhs(y, branch=self.branch)))
                - self.opts.equilibrium_tol
            )
        raise KeyError(name)

    def direction(self, name: str) -> float:
        if name == "sigma":
            # Only crossings from the current side toward the boundary.
            return 1.0 if self.branch == "minus" else -1.0
        return {"snowball": -1.0, "icefree": 1.0, "equilibrium": -1.0}[name]

    def scipy_events(self):
        evts = []
        for name in self.names:
            def make(name):
                def ev(t, y):
                    return self.g(name, y)
                ev.terminal = True
                ev.direction = self.direction(name)
                ev.name = name
                return ev
            evts.append(make(name))
        return evts


def _run_free_rk45(model, t0, y0, opts, events: _FreeEvents):
    """Advance one smooth branch until t_end or the first event."""
    sol = solve_ivp(
        lambda t, y: model.rhs(y, branch=events.branch),
        (t0, opts.t_end),
        y0,
        method="RK45",
        rtol=opts.rtol,
        atol=opts.atol,
        max_step=opts.max_step,
        events=events.scipy_events(),
    )
    if sol.status == -1:
        raise StepFailureError(sol.message, float(sol.t[-1]), sol.y[:, -1])
    ts, ys = sol.t, sol.y.T
    fired = None
    if sol.status == 1:
        for name, t_ev in zip(events.names, sol.t_events):
            if len(t_ev):
                fired = name
                break
    return ts, ys, fired


def _split_step(model: SpectralModel, y: np.ndarray, h: float,
                branch: str | None) -> np.ndarray:
    """One Strang step: half slow (RK4), exact fast update, half slow."""
    temps, eta = y[:-1], float(y[-1])
    eta1 = _advance_eta(model, temps, eta, 0.5 * h, branch)
    f = model.f_values(eta1, branch)
    temps1 = f + (temps - f) * np.exp(-model.rates * h)
    eta2 = _advance_eta(model, temps1, eta1, 0.5 * h, branch)
    return np.concatenate([temps1, [eta2]])


def _advance_eta(model, temps, eta, h, branch):
    """Classic RK4 for the scalar ice-line flow with temperatures frozen."""

    def g(e):
        return model.iceline_rate(np.concatenate([temps, [e]]), branch)

    k1 = g(eta)
    k2 = g(eta + 0.5 * h * k1)
    k3 = g(eta + 0.5 * h * k2)
    k4 = g(eta + h * k3)
    return eta + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _run_free_splitting(model, t0, y0, opts, events: _FreeEvents):
    """Splitting engine with step doubling and bisection event location."""
    branch = events.branch
    t = float(t0)
    y = np.array(y0, dtype=float)
    ts = [t]
    ys = [y.copy()]
    h = min(opts.max_step, max((opts.t_end - t) * 1e-3, 1e-6))
    g_prev = {name: events.g(name, y) for name in events.names}
    min_h = 1e-14 * max(1.0, abs(opts.t_end))

    while t < opts.t_end:
        h = min(h, opts.t_end - t)
        if h < min_h:
            raise StepFailureError("step size underflow", t, y)
        y_big = _split_step(model, y, h, branch)
        y_half = _split_step(
            model, _split_step(model, y, 0.5 * h, branch), 0.5 * h, branch
        )
        scale = opts.atol + opts.rtol * np.maximum(np.abs(y), np.abs(y_half))
        err = float(np.max(np.abs(y_big - y_half) / scale))
        if not np.isfinite(err):
            h *= 0.2
            continue
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** (-1.0 / 3.0))
            continue

        y_new = y_half
        fired = None
        for name in events.names:
            g0, g1 = g_prev[name], events.g(name, y_new)
            direction = events.direction(name)
            crossed = (g0 < 0.0 <= g1 and direction >= 0) or (
                g0 > 0.0 >= g1 and direction <= 0
            )
            if not crossed:
                continue
            lo, hi = 0.0, h
            y_ev, tau = y_new, h
            for _ in range(200):
                if hi - lo < 1e-16 * max(1.0, h):
                    break
                mid = 0.5 * (lo + hi)
                y_mid = _split_step(model, y, mid, branch)
                g_mid = events.g(name, y_mid)
                y_ev, tau = y_mid, mid
                if abs(g_mid) <= opts.event_tol:
                    break
                if (g_mid > 0) == (g0 > 0):
                    lo = mid
                else:
                    hi = mid
            fired = name
            y_new = y_ev
            t_new = t + tau
            break
        else:
            t_new = t + h
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** (-1.0 / 3.0)))
            h = min(opts.max_step, h * factor)

        t = t_new
        y = y_new
        ts.append(t)
        ys.append(y.copy())
        if fired:
            return np.array(ts), np.array(ys), fired
        g_prev = {name: events.g(name, y) for name in events.names}

    return np.array(ts), np.array(ys), None


# ---------------------------------------------------------------------------
# pinned motion (sliding at rho, clamped boundaries)
# ---------------------------------------------------------------------------


def _run_pinned(model, t0, y0, opts, pin_value: float, kind: str):
    """Integrate the fast subsystem with the ice line held at ``pin_value``.

    ``kind`` is ``"rho"`` (sliding), ``"snowball"`` or ``"icefree"``.
    Returns (ts, ys, release) where ``release`` is None if t_end was
    reached, else the name of the release event.  On the boundary the fast
    field is single-valued, so no branch forcing is needed.
    """
    y0 = np.array(y0, dtype=float)
    y0[-1] = pin_value
    n_fast = len(y0) - 1

    def rhs_fast(t, yf):
        return model.rhs(np.concatenate([yf, [pin_value]]))[:-1]

    evts = []

    def add(g, direction, name):
        g.terminal = True
        g.direction = direction
        g.name = name
        evts.append(g)

    if kind == "rho":
        add(lambda t, yf: model.iceline_rate(
            np.concatenate([yf, [pin_value]]), "minus"), -1.0, "exit_down")
        add(lambda t, yf: model.iceline_rate(
            np.concatenate([yf, [pin_value]]), "plus"), 1.0, "exit_up")
    else:
        direction = 1.0 if kind == "snowball" else -1.0
        add(lambda t, yf: model.iceline_rate(
            np.concatenate([yf, [pin_value]])), direction, "release")
    if opts.equilibrium_tol is not None:
        add(lambda t, yf: float(np.max(np.abs(rhs_fast(t, yf))))
            - opts.equilibrium_tol, -1.0, "equilibrium")

    sol = solve_ivp(
        rhs_fast,
        (t0, opts.t_end),
        y0[:n_fast],
        method="RK45",
        rtol=opts.rtol,
        atol=opts.atol,
        max_step=opts.max_step,
        events=evts,
    )
    if sol.status == -1:
        raise StepFailureError(sol.message, float(sol.t[-1]),
                               np.concatenate([sol.y[:, -1], [pin_value]]))
    ts = sol.t
    ys = np.column_stack([sol.y.T, np.full(len(sol.t), pin_value)])
    release = None
    if sol.status == 1:
        for ev, t_ev in zip(evts, sol.t_events):
            if len(t_ev):
                release = ev.name
                break
    return ts, ys, release


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------


def integrate(params: ModelParams, state0, opts: IntegratorOpts) -> Trajectory:
    """Integrate the full coupled system from ``state0``.

    Handles snow-line crossings (with sliding for the discontinuous
    relax-to-mean Jormungand variant), clamping at eta in {0, 1} with
    outward flow, and optional equilibrium detection.  The trajectory is
    deterministic for fixed options.
    """
    model = build_model(params)
    y = np.asarray(state0, dtype=float).copy()
    if y.shape != (model.n_state,):
        raise ValueError(f"state0 must have shape ({model.n_state},)")
    if not 0.0 <= y[-1] <= 1.0:
        raise ValueError(f"initial eta must lie in [0, 1], got {y[-1]}")

    use_splitting = opts.method == "splitting" or (
        opts.method == "auto" and params.is_diffusive
    )
    if use_splitting and not params.is_diffusive:
        raise ValueError("the splitting method applies to diffusive variants")
    run_free = _run_free_splitting if use_splitting else _run_free_rk45

    rho = _rho_of(params)
    all_t: list[np.ndarray] = []
    all_y: list[np.ndarray] = []
    log: list[TrajectoryEvent] = []
    status = "t_end"
    t = 0.0

    def emit(ts, ys):
        if all_t and len(ts) and np.isclose(ts[0], all_t[-1][-1]):
            ts, ys = ts[1:], ys[1:]
        if len(ts):
            all_t.append(np.asarray(ts, dtype=float))
            all_y.append(np.asarray(ys, dtype=float))

    if opts.equilibrium_tol is not None and float(
        np.max(np.abs(model.rhs(y)))
    ) <= opts.equilibrium_tol:
        log.append(TrajectoryEvent(0.0, "equilibrium", "initial state at rest"))
        return Trajectory(np.array([0.0]), y[None, :], model.labels, log,
                          "equilibrium")

    guard = 0
    while t < opts.t_end:
        guard += 1
        if guard > 10_000:
            raise StepFailureError("event loop failed to make progress", t, y)

        pinned_kind = None
        pin_value = 0.0
        if y[-1] <= 0.0 or y[-1] >= 1.0:
            edge = 0.0 if y[-1] <= 0.0 else 1.0
            y[-1] = edge
            rate = model.iceline_rate(y)
            outward = rate < 0 if edge == 0.0 else rate > 0
            if outward:
                pinned_kind = "snowball" if edge == 0.0 else "icefree"
                pin_value = edge
            else:
                y[-1] = edge + (_NUDGE if edge == 0.0 else -_NUDGE)
        if pinned_kind is None and rho is not None and abs(y[-1] - rho) <= _NUDGE:
            y[-1] = rho
            r_minus = model.iceline_rate(y, "minus")
            r_plus = model.iceline_rate(y, "plus")
            if not params.is_diffusive and r_minus > 0.0 > r_plus:
                pinned_kind, pin_value = "rho", rho
            else:
                direction = 1.0 if 0.5 * (r_minus + r_plus) > 0 else -1.0
                log.append(TrajectoryEvent(
                    t, "sigma_crossing",
                    f"{'upward' if direction > 0 else 'downward'}, one-sided "
                    f"rates ({r_minus:.3e}, {r_plus:.3e})"))
                y[-1] = rho + direction * _NUDGE

        if pinned_kind is not None:
            if pinned_kind == "rho":
                log.append(TrajectoryEvent(t, "sliding_start",
                                           "one-sided flows oppose at rho"))
            ts, ys, release = _run_pinned(model, t, y, opts, pin_value,
                                          pinned_kind)
            emit(ts, ys)
            t, y = float(ts[-1]), ys[-1].copy()
            terminal_status = {"rho": "sliding_at_rho",
                               "snowball": "boundary_snowball",
                               "icefree": "boundary_ice_free"}[pinned_kind]
            if release is None:
                status = terminal_status
                break
            if release == "equilibrium":
                log.append(TrajectoryEvent(t, "equilibrium",
                                           f"at rest while pinned ({pinned_kind})"))
                status = terminal_status
                break
            if release == "exit_down":
                log.append(TrajectoryEvent(t, "sliding_exit", "toward eta < rho"))
                y[-1] = pin_value - _NUDGE
            elif release == "exit_up":
                log.append(TrajectoryEvent(t, "sliding_exit", "toward eta > rho"))
                y[-1] = pin_value + _NUDGE
            else:
                log.append(TrajectoryEvent(t, "boundary_release",
                                           f"flow turned inward at {pinned_kind}"))
                y[-1] = pin_value + (_NUDGE if pin_value == 0.0 else -_NUDGE)
            continue

        events = _FreeEvents(model, opts, _side_of(y[-1], rho))
        ts, ys, fired = run_free(model, t, y, opts, events)
        emit(ts, ys)
        t, y = float(ts[-1]), ys[-1].copy()
        if fired is None:
            status = "t_end"
            break
        if fired == "equilibrium":
            log.append(TrajectoryEvent(t, "equilibrium",
                                       f"|rhs| <= {opts.equilibrium_tol:g}"))
            status = "equilibrium"
            break
        if fired == "sigma":
            y[-1] = rho
            continue
        if fired in ("snowball", "icefree"):
            log.append(TrajectoryEvent(t, fired, "ice line clamped"))
            y[-1] = 0.0 if fired == "snowball" else 1.0
            continue

    t_arr = np.concatenate(all_t) if all_t else np.array([0.0])
    y_arr = np.vstack(all_y) if all_y else y[None, :]
    if opts.sample_dt is not None:
        t_arr, y_arr = _resample(t_arr, y_arr, opts.sample_dt)
    return Trajectory(t_arr, y_arr, model.labels, log, status)


def integrate_reduced(flow: ReducedFlow, eta0: float,
                      opts: IntegratorOpts) -> Trajectory:
    """Integrate the scalar reduced flow eta_dot = eps*h(eta).

    Each segment integrates the current branch polynomial (a smooth
    extension across the snow line) and stops at the exact eta = rho
    event.  For the discontinuous variant the sliding rule of the
    differential inclusion applies there: if h_minus(rho) > 0 > h_plus(rho)
    the ice line stays pinned at rho; otherwise it crosses.  The ice line
    is clamped at the domain ends with the corresponding terminal status.
    """
    if not 0.0 <= eta0 <= 1.0:
        raise ValueError(f"eta0 must lie in [0, 1], got {eta0}")
    params = flow.params
    eps = params.eps
    rho = flow.rho if flow.two_branched else None

    ts_all = [0.0]
    etas_all = [float(eta0)]
    log: list[TrajectoryEvent] = []
    status = "t_end"
    t, eta = 0.0, float(eta0)

    def finish(status_str):
        if ts_all[-1] < opts.t_end:
            ts_all.append(opts.t_end)
            etas_all.append(eta)
        return status_str

    guard = 0
    while t < opts.t_end:
        guard += 1
        if guard > 1000:
            raise StepFailureError("event loop failed to make progress", t,
                                   np.array([eta]))

        if eta <= 0.0 and flow.value(0.0) < 0:
            log.append(TrajectoryEvent(t, "snowball", "ice line clamped"))
            eta = 0.0
            status = finish("boundary_snowball")
            break
        if eta >= 1.0 and flow.value(1.0) > 0:
            log.append(TrajectoryEvent(t, "icefree", "ice line clamped"))
            eta = 1.0
            status = finish("boundary_ice_free")
            break
        eta = min(max(eta, 0.0), 1.0)
        if rho is not None and abs(eta - rho) <= _NUDGE:
            v_minus = float(poly_eval(flow.h_minus, rho))
            v_plus = float(poly_eval(flow.h_plus, rho))
            if not flow.continuous and v_minus > 0.0 > v_plus:
                log.append(TrajectoryEvent(t, "sliding_start",
                                           "0 in the velocity hull at rho"))
                eta = rho
                status = finish("sliding_at_rho")
                break
            direction = 1.0 if 0.5 * (v_minus + v_plus) > 0 else -1.0
            log.append(TrajectoryEvent(t, "sigma_crossing",
                                       "upward" if direction > 0 else "downward"))
            eta = rho + direction * _NUDGE

        branch_poly = (
            flow.h_minus if (rho is not None and eta < rho) else flow.h_plus
        )

        events = []

        def add_event(g, direction, name):
            g.terminal = True
            g.direction = direction
            g.name = name
            events.append(g)

        add_event(lambda tt, yy: float(yy[0]), -1.0, "snowball")
        add_event(lambda tt, yy: float(yy[0] - 1.0), 1.0, "icefree")
        if rho is not None:
            sigma_dir = 1.0 if eta < rho else -1.0
            add_event(lambda tt, yy: float(yy[0] - rho), sigma_dir, "sigma")
        if opts.equilibrium_tol is not None:
            add_event(
                lambda tt, yy: abs(eps * poly_eval(branch_poly, float(yy[0])))
                - opts.equilibrium_tol,
                -1.0, "equilibrium",
            )
            if abs(eps * poly_eval(branch_poly, eta)) <= opts.equilibrium_tol:
                log.append(TrajectoryEvent(t, "equilibrium",
                                           "initial state at rest"))
                status = finish("equilibrium")
                break

        sol = solve_ivp(
            lambda tt, yy: [eps * poly_eval(branch_poly, float(yy[0]))],
            (t, opts.t_end),
            [eta],
            method="RK45",
            rtol=opts.rtol,
            atol=opts.atol,
            max_step=opts.max_step,
            events=events,
        )
        if sol.status == -1:
            raise StepFailureError(sol.message, float(sol.t[-1]), sol.y[:, -1])
        ts_all.extend(sol.t[1:].tolist())
        etas_all.extend(sol.y[0, 1:].tolist())
        t, eta = float(sol.t[-1]), float(sol.y[0, -1])
        fired = None
        if sol.status == 1:
            for ev, t_ev in zip(events, sol.t_events):
                if len(t_ev):
                    fired = ev.name
                    break
        if fired is None:
            status = "t_end"
            break
        if fired == "equilibrium":
            log.append(TrajectoryEvent(t, "equilibrium",
                                       f"|eps*h| <= {opts.equilibrium_tol:g}"))
            status = "equilibrium"
            break
        if fired == "sigma":
            eta = rho
        elif fired == "snowball":
            eta = 0.0  # clamping handled at the loop head
        elif fired == "icefree":
            eta = 1.0

    t_arr = np.asarray(ts_all)
    y_arr = np.asarray(etas_all)[:, None]
    if opts.sample_dt is not None:
        t_arr, y_arr = _resample(t_arr, y_arr, opts.sample_dt)
    return Trajectory(t_arr, y_arr, ["eta"], log, status)


@dataclass
class FenichelReport:
    """Observed distance from the critical manifold as eps varies."""

    eps_values: list[float]
    deviations: list[float]
    eta_end: list[float]
    slope: float

    def ratio(self, i: int, j: int) -> float:
        return self.deviations[i] / self.deviations[j]


def fenichel_check(
    params: ModelParams,
    eta_star: float,
    eps_list,
    eta_offset: float = -0.12,
    temp_perturbation: float = 1.0,
    slow_time: float = 0.05,
) -> FenichelReport:
    """Measure terminal distance from the critical manifold for each eps.

    Starting from the critical manifold at ``eta_star + eta_offset`` with
    temperatures perturbed by ``temp_perturbation``, integrates for a
    fixed time in the slow scale (``slow_time / eps``) and reports
    max_n |T_2n - f_2n(eta_end)|.  For an attracting manifold the
    deviation scales linearly with eps, so the fitted log-log slope should
    be near one.
    """
    if not params.is_diffusive:
        raise ValueError("fenichel_check applies to diffusive variants")
    eta0 = min(max(eta_star + eta_offset, 0.02), 0.98)
    deviations, etas_end = [], []
    for eps in eps_list:
        p = params.with_(eps=float(eps))
        model = build_model(p)
        y0 = model.equilibrium_state(eta0)
        y0[:-1] += temp_perturbation
        opts = IntegratorOpts(t_end=slow_time / float(eps))
        traj = integrate(p, y0, opts)
        eta_end = traj.final_eta
        dev = float(np.max(np.abs(traj.final_state[:-1] - model.f_values(eta_end))))
        deviations.append(dev)
        etas_end.append(eta_end)
    logs = np.log(np.asarray(eps_list, dtype=float))
    logd = np.log(np.maximum(deviations, 1e-300))
    slope = float(np.polyfit(logs, logd, 1)[0]) if len(eps_list) > 1 else np.nan
    return FenichelReport(list(map(float, eps_list)), deviations, etas_end, slope)
