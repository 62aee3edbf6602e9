"""Command-line interface.

Subcommands
-----------
insolation-coeffs   Legendre coefficients of the exact insolation integral.
reduced-poly        Monomial coefficients of the reduced polynomial h.
equilibria          Rest points of the reduced flow with stability.
simulate            Time integration (full system or reduced flow) to CSV.
sweep               One-parameter bifurcation sweep to CSV plus fold summary.
validate            Run the closed-form-versus-quadrature oracle suite.

Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.
Outputs are deterministic: identical configuration and flags produce
byte-identical files.  Floats are printed with 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .config import ConfigError, load_config
from .dynamics import StepFailureError
from .legendre import NonConvergenceError
from .reduced import DegenerateRootError, NoSolutionError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _open_output(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _write_text(path: str, text: str):
    stream, owned = _open_output(path)
    try:
        stream.write(text)
        if not text.endswith("\n"):
            stream.write("\n")
    finally:
        if owned:
            stream.close()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_insolation_coeffs(args) -> int:
    from .insolation import s_coefficients

    coeffs = s_coefficients(beta_deg=args.beta, max_mode=args.max_mode,
                            tol=args.tol)
    payload = {"beta": args.beta,
               "s": {str(2 * n): float(c) for n, c in enumerate(coeffs)}}
    _write_text(args.output, json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_reduced_poly(args) -> int:
    from .reduced import build_h

    params = load_config(args.config)
    flow = build_h(params)
    payload = {
        "transport": params.transport,
        "albedo": params.albedo_kind,
        "N": params.N,
        "degree": flow.degree(),
    }
    if flow.two_branched:
        payload["rho"] = flow.rho
        payload["continuous_at_rho"] = flow.continuous
        payload["h_minus"] = [float(c) for c in flow.h_minus]
        payload["h_plus"] = [float(c) for c in flow.h_plus]
    else:
        payload["h"] = [float(c) for c in flow.h]
    _write_text(args.output, json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_equilibria(args) -> int:
    from .reduced import build_h, find_equilibria

    params = load_config(args.config)
    equilibria = find_equilibria(build_h(params))
    payload = [
        {
            "eta": eq.eta,
            "stability": eq.stability,
            "T0": eq.global_mean,
            "coeffs": list(eq.temps),
        }
        for eq in equilibria
    ]
    _write_text(args.output, json.dumps(payload, indent=2))
    return EXIT_OK


def _simulate_rows(params, traj):
    """CSV rows t, eta, T0..T2N, Tbar, T_iceline, event for a trajectory."""
    from .model import build_model

    model = build_model(params)
    reduced = traj.states.shape[1] == 1
    header = (
        ["t", "eta"]
        + [f"T{2 * n}" for n in range(params.N + 1)]
        + ["Tbar", "T_iceline", "event"]
    )
    rows = [header]
    event_index = 0
    events = sorted(traj.events, key=lambda e: e.t)
    prev_t = -np.inf
    for t, state in zip(traj.t, traj.states):
        labels = []
        while event_index < len(events) and prev_t < events[event_index].t <= t:
            labels.append(events[event_index].label)
            event_index += 1
        prev_t = t
        if reduced:
            state = model.equilibrium_state(float(state[0]))
        proj = model.legendre_projection(state)
        row = (
            [_fmt(t), _fmt(state[-1])]
            + [_fmt(v) for v in proj]
            + [_fmt(model.global_mean(state)),
               _fmt(model.iceline_temperature(state)),
               "+".join(labels)]
        )
        rows.append(row)
    return rows


def _cmd_simulate(args) -> int:
    from .dynamics import IntegratorOpts, integrate, integrate_reduced
    from .model import build_model
    from .reduced import build_h

    params = load_config(args.config)
    if not 0.0 <= args.eta0 <= 1.0:
        raise ConfigError(f"--eta0 must lie in [0, 1], got {args.eta0}")
    opts = IntegratorOpts(
        t_end=args.t_end,
        rtol=args.rtol,
        atol=args.atol,
        equilibrium_tol=args.equilibrium_tol,
        method=args.method,
        sample_dt=args.sample_dt,
    )
    if args.reduced:
        traj = integrate_reduced(build_h(params), args.eta0, opts)
    else:
        state0 = build_model(params).equilibrium_state(args.eta0)
        traj = integrate(params, state0, opts)
    rows = _simulate_rows(params, traj)
    stream, owned = _open_output(args.output)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerows(rows)
    finally:
        if owned:
            stream.close()
    print(f"status: {traj.status}", file=sys.stderr)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    from .sweep import SweepSpec, bistability_window, run_sweep

    params = load_config(args.config)
    spec = SweepSpec(
        params=params,
        parameter=args.param,
        lo=args.min,
        hi=args.max,
        count=args.steps,
        fold_tol=args.fold_tol,
        workers=args.workers,
    )
    result = run_sweep(spec)
    stream, owned = _open_output(args.output)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["param", "eta", "stability", "T0", "branch_id"])
        for branch in result.branches:
            for value, eta, t0 in zip(branch.parameter_values, branch.etas,
                                      branch.global_means):
                writer.writerow([_fmt(value), _fmt(eta), branch.stability,
                                 _fmt(t0), branch.branch_id])
    finally:
        if owned:
            stream.close()

    summary = {
        "parameter": args.param,
        "grid": {"min": args.min, "max": args.max, "steps": args.steps},
        "folds": [
            {"param": ev.parameter, "eta": ev.eta, "kind": ev.kind,
             "delta_roots": ev.delta_roots}
            for ev in result.folds
        ],
        "bistability_windows": [list(w) for w in bistability_window(result)],
        "branches": [
            {"id": b.branch_id, "stability": b.stability,
             "param_range": list(b.parameter_range),
             "eta_range": [b.etas[0], b.etas[-1]],
             "start": b.start_annotation, "end": b.end_annotation}
            for b in result.branches
        ],
    }
    summary_text = json.dumps(summary, indent=2)
    if args.summary is not None:
        _write_text(args.summary, summary_text)
    elif args.output != "-":
        print(summary_text)
    return EXIT_OK


def _cmd_validate(args) -> int:
    failures = _run_validation(seed=args.seed, cases=args.cases,
                               verbose=not args.quiet)
    return EXIT_OK if failures == 0 else EXIT_NUMERICAL


def _run_validation(seed: int, cases: int, verbose: bool = True) -> int:
    """Closed forms versus independent numerical oracles; returns #failures."""
    from numpy.polynomial import polynomial as npp

    from .albedo import (BudykoAlbedo, JormungandAlbedo, budyko_moments,
                         jormungand_moments, moment_by_quadrature)
    from .insolation import s_quadratic, series_eval
    from .legendre import (legendre_antideriv, legendre_eval, legendre_poly,
                           poly_eval, quadrature)
    from .model import (build_model, jacobian_gap_at_sigma,
                        modern_climate_params, neoproterozoic_params,
                        RELAX_TO_MEAN)
    from .reduced import build_h

    rng = np.random.default_rng(seed)
    failures = 0

    def check(name, worst, tol):
        nonlocal failures
        ok = worst <= tol
        if not ok:
            failures += 1
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name}: worst {worst:.3e} "
                  f"(tol {tol:.0e})")

    # Legendre orthogonality and the diffusion eigenfunction identity.
    worst = 0.0
    for m in range(7):
        for n in range(7):
            val = quadrature(
                lambda y: legendre_eval(m, y) * legendre_eval(n, y), 0, 1,
                tol=1e-12)
            expect = (1.0 / (4 * n + 1)) if m == n else 0.0
            worst = max(worst, abs(val - expect))
    check("legendre orthogonality", worst, 1e-9)

    worst = 0.0
    ys = np.linspace(0.01, 0.99, 50)
    for n in range(7):
        p = legendre_poly(n)
        dp = npp.polyder(p)
        lhs = npp.polyder(npp.polymul(np.array([1.0, 0.0, -1.0]), dp))
        resid = npp.polyadd(lhs, 2 * n * (2 * n + 1) * p)
        scale = max(1.0, float(np.max(np.abs(poly_eval(p, ys)))))
        worst = max(worst, float(np.max(np.abs(poly_eval(resid, ys)))) / scale)
    check("legendre eigenfunction identity", worst, 1e-9)

    # Albedo moment polynomials against direct quadrature.
    s = s_quadratic()
    bud = BudykoAlbedo(0.32, 0.62)
    jorm = JormungandAlbedo(0.32, 0.36, 0.8, 0.35)
    mb = budyko_moments(bud, s, 3)
    ma, mbj = jormungand_moments(jorm, s, 3)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(0, 4))
        eta = float(rng.uniform(0, 1))
        exact = poly_eval(mb[n], eta)
        worst = max(worst, abs(exact - moment_by_quadrature(bud, n, eta, s)))
        exact = poly_eval(ma[n] if eta < jorm.rho else mbj[n], eta)
        worst = max(worst, abs(exact - moment_by_quadrature(jorm, n, eta, s)))
    check("albedo moments vs quadrature", worst, 1e-10)

    # Continuity of the glued diffusive field on the switching boundary and
    # the one-sided Jacobian gap against its closed form.
    pj = neoproterozoic_params(N=2)
    mj = build_model(pj)
    worst = 0.0
    for _ in range(10):
        x = rng.normal(scale=20.0, size=mj.n_state)
        x[-1] = pj.albedo.rho
        worst = max(worst, float(np.max(np.abs(
            mj.rhs(x, branch="minus") - mj.rhs(x, branch="plus")))))
    check("glued field continuity on sigma", worst, 1e-12)

    gap = jacobian_gap_at_sigma(pj)
    closed = pj.Q / pj.B * (pj.albedo.alpha2 - pj.albedo.alpha_ice) * \
        series_eval(s_quadratic(), pj.albedo.rho)
    step = 1e-6
    fp = mj.f_values(pj.albedo.rho + step, "plus")[0]
    fp0 = mj.f_values(pj.albedo.rho, "plus")[0]
    fm = mj.f_values(pj.albedo.rho, "minus")[0]
    fm0 = mj.f_values(pj.albedo.rho - step, "minus")[0]
    fd = (fp - fp0) / step - (fm - fm0) / step
    worst = max(abs(gap - closed) / abs(closed), abs(gap - fd) / abs(closed))
    check("jacobian gap at sigma", worst, 1e-4)

    # Relaxation global-mean closed forms against piecewise quadrature.
    worst = 0.0
    for params in (modern_climate_params(transport=RELAX_TO_MEAN, N=2),
                   neoproterozoic_params(transport=RELAX_TO_MEAN, N=2)):
        mm = build_model(params)
        for _ in range(max(2, cases // 8)):
            st = rng.normal(scale=10.0, size=mm.n_state)
            st[-1] = float(rng.uniform(0, 1))
            tbar = mm.global_mean(st)
            oracle = sum(
                quadrature(lambda y, c=c: series_eval(c, y), lo, hi, tol=1e-12)
                for lo, hi, c in mm.piece_coefficients(st))
            worst = max(worst, abs(tbar - oracle))
    check("relax global mean vs quadrature", worst, 1e-9)

    # Reduced polynomial versus the model's critical-manifold temperature.
    worst = 0.0
    for params in (modern_climate_params(D=0.35, N=1),
                   neoproterozoic_params(N=2),
                   modern_climate_params(transport=RELAX_TO_MEAN, N=1),
                   neoproterozoic_params(transport=RELAX_TO_MEAN, N=1)):
        flow = build_h(params)
        mm = build_model(params)
        for eta in np.linspace(0.02, 0.98, 25):
            branch = None
            if params.albedo_kind == "jormungand":
                branch = "minus" if eta < params.albedo.rho else "plus"
            hv = flow.value(float(eta))
            tv = mm.iceline_temperature(mm.equilibrium_state(float(eta)),
                                        branch) - params.T_c
            worst = max(worst, abs(hv - tv))
    check("reduced flow vs critical manifold", worst, 1e-9)

    if verbose:
        print("validation " + ("PASSED" if failures == 0 else
                               f"FAILED ({failures} checks)"))
    return failures


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iceline",
        description="Spectral energy-balance models with a dynamic ice line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("insolation-coeffs",
                       help="Legendre coefficients of the insolation integral")
    p.add_argument("--beta", type=float, default=23.5,
                   help="obliquity in degrees (default 23.5)")
    p.add_argument("--max-mode", type=int, default=5,
                   help="highest mode index n (default 5)")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="projection quadrature tolerance")
    p.add_argument("--output", default="-", help="output path (default stdout)")
    p.set_defaults(func=_cmd_insolation_coeffs)

    p = sub.add_parser("reduced-poly",
                       help="monomial coefficients of the reduced polynomial")
    p.add_argument("--config", required=True)
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_reduced_poly)

    p = sub.add_parser("equilibria",
                       help="rest points of the reduced flow with stability")
    p.add_argument("--config", required=True)
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_equilibria)

    p = sub.add_parser("simulate", help="integrate the model, write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--eta0", type=float, required=True,
                   help="initial ice-line position in [0, 1]")
    p.add_argument("--t-end", type=float, required=True, dest="t_end")
    p.add_argument("--reduced", action="store_true",
                   help="integrate the reduced scalar flow instead of the "
                        "full system")
    p.add_argument("--method", choices=("auto", "rk45", "splitting"),
                   default="auto")
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--atol", type=float, default=1e-9)
    p.add_argument("--equilibrium-tol", type=float, default=None,
                   help="stop early once |rhs| falls below this")
    p.add_argument("--sample-dt", type=float, default=None,
                   help="uniform output sampling interval")
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="bifurcation sweep over one parameter")
    p.add_argument("--config", required=True)
    p.add_argument("--param", choices=("A", "D", "C", "Q"), required=True)
    p.add_argument("--min", type=float, required=True)
    p.add_argument("--max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--fold-tol", type=float, default=0.05,
                   help="bisection tolerance for fold refinement")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", default="-", help="CSV output path")
    p.add_argument("--summary", default=None,
                   help="fold/bistability JSON path (default: stdout when "
                        "--output is a file)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("validate",
                       help="run the closed-form vs quadrature oracle suite")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--cases", type=int, default=20,
                   help="random cases per oracle check")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonConvergenceError, NoSolutionError, DegenerateRootError,
            StepFailureError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
