"""End-to-end acceptance checks, one per headline result.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible with
``pytest -s`` or in the captured output of failures) and asserts the
published target values at their stated tolerances.

Two checks are known to fail and are kept failing on purpose; the package
reproduces its own mathematics exactly (every closed form is verified
against independent quadrature oracles elsewhere in the suite), but two
published target values are not reproducible from the stated constants:

* the two-term insolation truncation is only within 4.8% relative error
  of the exact integral at obliquity 23.5 deg (the 3% claim holds at
  24.5 deg, the obliquity of the published overlay, and as an absolute
  error at both obliquities);
* the relaxation-transport cubic with C = 3.09 and s_2 = -0.477 has roots
  (0.2532, 0.9619), not (0.24, 0.94); the historical values trace to
  earlier studies with C = 3.04 and s_2 = -0.482, which indeed give
  (0.2455, 0.9487).  Direct simulation of the full piecewise system with
  quadrature-evaluated global mean confirms the attractor at 0.9619.

See README "Known result deviations" for the full analysis.
"""

import time

import numpy as np
import pytest

from iceline.dynamics import IntegratorOpts, integrate, integrate_reduced
from iceline.insolation import s_coefficients, s_exact, s_quadratic, series_eval
from iceline.legendre import poly_eval
from iceline.model import (
    RELAX_TO_MEAN,
    build_model,
    modern_climate_params,
    neoproterozoic_params,
)
from iceline.reduced import (
    SLIDING_AT_RHO,
    STABLE,
    UNSTABLE,
    build_h,
    find_equilibria,
    has_sliding_equilibrium,
    slow_manifold_temps,
    solve_D_for_target,
)
from iceline.sweep import SweepSpec, bistability_window, run_sweep

S_COMPUTED = (1.0, -0.47594, -0.04438, 0.00827, 0.01394, 0.00859)


def report(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


def interior(eqs):
    return [e for e in eqs if e.stability in (STABLE, UNSTABLE)]


def test_acceptance_1_insolation():
    t0 = time.monotonic()
    s2 = s_coefficients(beta_deg=23.5, max_mode=1)[1]
    s2_ok = abs(s2 - (-0.477)) <= 0.003

    ys = np.arange(0.0, 1.0001, 0.01)
    exact = np.array([s_exact(float(y), 23.5, tol=1e-9) for y in ys])
    rel = np.abs(series_eval(s_quadratic(), ys) - exact) / exact
    rel_max = float(rel.max())
    rel_ok = rel_max <= 0.03
    elapsed = time.monotonic() - t0

    report("acceptance 1 (insolation)", s2_ok and rel_ok and elapsed < 5.0,
           f"s2 = {s2:.5f} (target -0.477 +- 0.003), uniform relative error "
           f"of the two-term truncation = {rel_max:.4f} (target <= 0.03), "
           f"runtime {elapsed:.2f}s")
    assert elapsed < 5.0
    assert s2_ok
    assert rel_ok, (
        f"two-term truncation: max relative error {rel_max:.4f} at obliquity "
        f"23.5 deg exceeds 0.03 (worst near y = {ys[rel.argmax()]:.2f}). "
        "The 3% bound is satisfied at obliquity 24.5 deg (error 0.024, the "
        "obliquity of the published curve overlay) and as an absolute bound "
        "(max |error| = 0.028 <= 0.03) at 23.5 deg, but not as stated. "
        "See README, Known result deviations."
    )


def test_acceptance_2_small_stable_cap():
    t0 = time.monotonic()
    params = modern_climate_params(D=0.35, N=1)
    inner = interior(find_equilibria(build_h(params)))
    elapsed = time.monotonic() - t0
    ok = (
        len(inner) == 2
        and inner[0].stability == UNSTABLE
        and inner[1].stability == STABLE
        and abs(inner[1].eta - 0.837) <= 0.010
        and abs(inner[1].global_mean - 10.9) <= 0.2
        and elapsed < 1.0
    )
    report("acceptance 2 (small stable cap)", ok,
           f"{len(inner)} interior equilibria, stable eta* = "
           f"{inner[1].eta:.4f} (target 0.837 +- 0.010), T0* = "
           f"{inner[1].global_mean:.2f} C (target 10.9 +- 0.2), "
           f"runtime {elapsed:.2f}s")
    assert ok


def test_acceptance_3_diffusivity_calibration():
    params = modern_climate_params(D=0.35, N=1)
    d_star = solve_D_for_target(params, 0.94)
    t0_star = float(slow_manifold_temps(params.with_(D=d_star), 0.94)[0])
    inner = interior(find_equilibria(build_h(params.with_(D=d_star))))
    stabilities = [e.stability for e in inner]
    inner45 = interior(find_equilibria(build_h(params.with_(D=0.45))))
    no_stable_45 = all(e.stability != STABLE for e in inner45)
    ok = (
        abs(d_star - 0.394) <= 0.002
        and abs(t0_star - 14.6) <= 0.2
        and stabilities == [UNSTABLE, STABLE, UNSTABLE]
        and no_stable_45
    )
    report("acceptance 3 (D calibration and SICI)", ok,
           f"D* = {d_star:.4f} (target 0.394 +- 0.002), T0* = "
           f"{t0_star:.2f} C (target 14.6 +- 0.2), roots at D* = "
           f"{stabilities}, stable cap at D=0.45: {not no_stable_45}")
    assert ok


def test_acceptance_4_jormungand_states():
    t0 = time.monotonic()
    flow1 = build_h(neoproterozoic_params(N=1))
    inner1 = interior(find_equilibria(flow1))
    below = [e for e in inner1 if e.eta < 0.35]
    above = [e for e in inner1 if e.eta >= 0.35]
    n1_ok = (
        len(below) == 1
        and below[0].stability == STABLE
        and [e.stability for e in above] == [UNSTABLE, STABLE]
    )
    higher_ok = True
    for N in (2, 5):
        innerN = interior(find_equilibria(build_h(neoproterozoic_params(N=N))))
        stable = [e for e in innerN if e.stability == STABLE]
        higher_ok &= (len(stable) == 1 and stable[0].eta < 0.35
                      and not [e for e in innerN if e.eta >= 0.35])
    elapsed = time.monotonic() - t0
    ok = n1_ok and higher_ok and elapsed < 5.0
    report("acceptance 4 (tropical ice line)", ok,
           f"N=1: stable tropical root at {below[0].eta:.4f} plus "
           f"unstable/stable pair poleward; N=2,5: unique stable tropical "
           f"state: {higher_ok}; runtime {elapsed:.2f}s")
    assert ok


def test_acceptance_5_bifurcation_values():
    t0 = time.monotonic()
    spec = SweepSpec(neoproterozoic_params(N=5), "A", 140.0, 200.0, 601)
    result = run_sweep(spec)
    elapsed = time.monotonic() - t0
    fold_params = sorted(ev.parameter for ev in result.folds
                         if ev.kind == "fold")
    targets = [(150.0, 2.0), (157.0, 2.0), (161.5, 1.5), (187.0, 2.0)]
    fold_ok = len(fold_params) == 4 and all(
        abs(found - target) <= tol
        for found, (target, tol) in zip(fold_params, targets)
    )
    windows = bistability_window(result)
    window_ok = (
        len(windows) == 1
        and abs(windows[0][0] - 157.0) <= 2.0
        and abs(windows[0][1] - 161.5) <= 1.5
        and min(abs(windows[0][0] - f) for f in fold_params) <= 1.5
        and min(abs(windows[0][1] - f) for f in fold_params) <= 1.5
    )
    ok = fold_ok and window_ok and elapsed < 120.0
    report("acceptance 5 (bifurcation values)", ok,
           f"folds at A = {[round(f, 2) for f in fold_params]} (targets "
           f"150, 157, 161.5, 187), bistability window = "
           f"{[round(w, 2) for w in windows[0]] if windows else None}, "
           f"runtime {elapsed:.1f}s")
    assert ok


def test_acceptance_6_relaxation_budyko():
    flow = build_h(modern_climate_params(transport=RELAX_TO_MEAN, N=1))
    inner = interior(find_equilibria(flow))
    assert len(inner) == 2
    assert [e.stability for e in inner] == [UNSTABLE, STABLE]
    unstable, stable = inner[0].eta, inner[1].eta

    rich = interior(find_equilibria(build_h(modern_climate_params(
        transport=RELAX_TO_MEAN, N=5, s=S_COMPUTED))))
    shift = max(abs(rich[0].eta - unstable), abs(rich[1].eta - stable))

    roots_ok = abs(unstable - 0.24) <= 0.01 and abs(stable - 0.94) <= 0.01
    shift_ok = shift <= 0.02
    report("acceptance 6 (relaxation transport roots)", roots_ok and shift_ok,
           f"cubic roots ({unstable:.4f}, {stable:.4f}) vs targets "
           f"(0.24 +- 0.01, 0.94 +- 0.01); root shift from computed "
           f"higher insolation modes = {shift:.4f} (target <= 0.02)")
    assert roots_ok, (
        f"relaxation cubic roots are ({unstable:.4f}, {stable:.4f}) with "
        "C = 3.09 and s_2 = -0.477, outside the targets (0.24 +- 0.01, "
        "0.94 +- 0.01). Direct simulation of the raw two-piece system with "
        "quadrature-evaluated global mean confirms the stable attractor at "
        "0.9619, so the computed roots are faithful to the stated "
        "constants; the target values are reproduced by the older "
        "parameter choices C = 3.04, s_2 = -0.482, which give "
        "(0.2455, 0.9487). See README, Known result deviations."
    )
    assert shift_ok, (
        f"adding the computed insolation modes s_4..s_10 moves the stable "
        f"root by {shift:.4f} > 0.02 (0.9619 -> 0.9311). The structure "
        "(one unstable, one stable root) is unchanged. See README, Known "
        "result deviations."
    )


def test_acceptance_7_filippov_snow_line():
    params = neoproterozoic_params(transport=RELAX_TO_MEAN, N=1, eps=1e-2)
    flow = build_h(params)
    sign_ok = (poly_eval(flow.h_minus, flow.rho) > 0.0
               > poly_eval(flow.h_plus, flow.rho))
    assert sign_ok and has_sliding_equilibrium(flow)

    all_pinned = True
    reach_times = []
    for eta0 in np.linspace(0.05, 0.95, 10):
        traj = integrate_reduced(flow, float(eta0),
                                 IntegratorOpts(t_end=2000.0))
        pinned = (traj.status == SLIDING_AT_RHO
                  and traj.final_eta == flow.rho)
        all_pinned &= pinned
        starts = [e.t for e in traj.events if e.label == "sliding_start"]
        reach_times.append(starts[0] if starts else np.inf)
    finite = all(t < 2000.0 for t in reach_times)

    # Full (non-reduced) system: the ice line also pins at the snow line.
    model = build_model(params)
    traj_full = integrate(params, model.equilibrium_state(0.6),
                          IntegratorOpts(t_end=2000.0, rtol=1e-8, atol=1e-8,
                                         equilibrium_tol=1e-6))
    full_ok = (traj_full.status == SLIDING_AT_RHO
               and traj_full.final_eta == params.albedo.rho)

    ok = sign_ok and all_pinned and finite and full_ok
    report("acceptance 7 (snow-line pinning)", ok,
           f"h-(rho) = {poly_eval(flow.h_minus, flow.rho):.3f} > 0 > "
           f"h+(rho) = {poly_eval(flow.h_plus, flow.rho):.3f}; every eta0 "
           f"in (0,1) reaches rho in finite time (max "
           f"{max(reach_times):.1f}) and stays pinned; full system pins "
           f"too: {full_ok}")
    assert ok


def test_acceptance_8_oracle_suite():
    t0 = time.monotonic()
    from iceline.albedo import (BudykoAlbedo, JormungandAlbedo,
                                budyko_moments, jormungand_moments,
                                moment_by_quadrature)
    from iceline.legendre import legendre_eval, quadrature
    from iceline.insolation import series_eval as ser_eval
    from iceline.model import jacobian_gap_at_sigma

    rng = np.random.default_rng(2024)
    details = []

    # (a) albedo-moment polynomials vs direct quadrature, 40 random cases.
    s = s_quadratic()
    bud = BudykoAlbedo(0.32, 0.62)
    jorm = JormungandAlbedo(0.32, 0.36, 0.8, 0.35)
    mb = budyko_moments(bud, s, 3)
    ma, mbj = jormungand_moments(jorm, s, 3)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(0, 4))
        eta = float(rng.uniform(0, 1))
        worst = max(worst, abs(poly_eval(mb[n], eta)
                               - moment_by_quadrature(bud, n, eta, s)))
        worst = max(worst, abs(
            poly_eval(ma[n] if eta < jorm.rho else mbj[n], eta)
            - moment_by_quadrature(jorm, n, eta, s)))
    a_ok = worst <= 1e-10
    details.append(f"(a) moments {worst:.1e}")

    # (b) orthogonality and eigenfunction identities.
    worst = 0.0
    for m in range(7):
        for n in range(7):
            val = quadrature(lambda y: legendre_eval(m, y) * legendre_eval(n, y),
                             0, 1, tol=1e-11)
            worst = max(worst, abs(val - (1.0 / (4 * n + 1) if m == n else 0.0)))
    b_ok = worst <= 1e-9
    details.append(f"(b) orthogonality {worst:.1e}")

    # (c) glued-field continuity and the one-sided Jacobian gap.
    pj = neoproterozoic_params(N=1)
    mj = build_model(pj)
    worst = 0.0
    for _ in range(10):
        x = rng.normal(scale=20.0, size=mj.n_state)
        x[-1] = pj.albedo.rho
        worst = max(worst, float(np.max(np.abs(
            mj.rhs(x, branch="minus") - mj.rhs(x, branch="plus")))))
    gap = jacobian_gap_at_sigma(pj)
    closed = (pj.Q / pj.B) * (0.8 - 0.36) * ser_eval(s_quadratic(), 0.35)
    step = 1e-6
    fd = ((mj.f_values(0.35 + step, "plus")[0]
           - mj.f_values(0.35, "plus")[0]) / step
          - (mj.f_values(0.35, "minus")[0]
             - mj.f_values(0.35 - step, "minus")[0]) / step)
    c_ok = (worst <= 1e-12
            and abs(gap - closed) / closed <= 1e-4
            and abs(gap - fd) / closed <= 1e-4)
    details.append(f"(c) continuity {worst:.1e}, gap rel "
                   f"{abs(gap - fd) / closed:.1e}")

    # (d) full-versus-reduced terminal ice line, eps in {1e-2, 1e-3}.
    d_ok = True
    for eps in (1e-2, 1e-3):
        p = modern_climate_params(D=0.35, N=1, eps=eps)
        opts = IntegratorOpts(t_end=3.0 / eps, rtol=1e-7, atol=1e-7)
        full = integrate(p, build_model(p).equilibrium_state(0.5), opts)
        red = integrate_reduced(build_h(p), 0.5, opts)
        gap_eta = abs(full.final_eta - red.final_eta)
        d_ok &= gap_eta <= 10.0 * eps
        details.append(f"(d) eps={eps:g}: {gap_eta:.1e}")

    # (e) relaxation global mean vs piecewise quadrature oracle.
    worst = 0.0
    for params in (modern_climate_params(transport=RELAX_TO_MEAN, N=2),
                   neoproterozoic_params(transport=RELAX_TO_MEAN, N=2)):
        mm = build_model(params)
        for _ in range(5):
            st = rng.normal(scale=10.0, size=mm.n_state)
            st[-1] = float(rng.uniform(0, 1))
            oracle = sum(
                quadrature(lambda y, c=c: ser_eval(c, y), lo, hi, tol=1e-12)
                for lo, hi, c in mm.piece_coefficients(st))
            worst = max(worst, abs(mm.global_mean(st) - oracle))
    e_ok = worst <= 1e-9
    details.append(f"(e) Tbar {worst:.1e}")

    elapsed = time.monotonic() - t0
    ok = a_ok and b_ok and c_ok and d_ok and e_ok and elapsed < 180.0
    report("acceptance 8 (oracle suite)", ok,
           "; ".join(details) + f"; runtime {elapsed:.1f}s")
    assert ok
