import numpy as np
import pytest
from numpy.polynomial import polynomial as npp

from iceline.insolation import s_coefficients
from iceline.legendre import poly_eval
from iceline.model import (
    RELAX_TO_MEAN,
    build_model,
    modern_climate_params,
    neoproterozoic_params,
)
from iceline.reduced import (
    BOUNDARY_ICE_FREE,
    BOUNDARY_SNOWBALL,
    SLIDING_AT_RHO,
    STABLE,
    UNSTABLE,
    DegenerateRootError,
    NoSolutionError,
    build_h,
    filippov_interval,
    find_equilibria,
    has_sliding_equilibrium,
    slow_manifold_temps,
    solve_D_for_target,
)

# A computed insolation series with nonzero coefficients through mode 5
# (frozen from the projection of the exact integral at 23.5 degrees).
S_COMPUTED = (1.0, -0.47594, -0.04438, 0.00827, 0.01394, 0.00859)


def interior(eqs):
    return [e for e in eqs if e.stability in (STABLE, UNSTABLE)]


@pytest.mark.parametrize("N", [1, 2, 5])
def test_degree_diffusive(N):
    flow = build_h(modern_climate_params(D=0.35, N=N))
    assert flow.degree() == 4 * N + 3


@pytest.mark.parametrize("N", [1, 2, 5])
def test_degree_relax(N):
    p = modern_climate_params(transport=RELAX_TO_MEAN, N=N,
                              s=S_COMPUTED[: N + 1])
    assert build_h(p).degree() == 2 * N + 1


def test_relax_jormungand_degrees():
    p = neoproterozoic_params(transport=RELAX_TO_MEAN, N=2,
                              s=S_COMPUTED[:3])
    flow = build_h(p)
    assert len(npp.polytrim(flow.h_minus, tol=0.0)) - 1 == 5
    assert len(npp.polytrim(flow.h_plus, tol=0.0)) - 1 == 5


def test_diffusive_jormungand_continuous_at_rho():
    flow = build_h(neoproterozoic_params(N=1))
    assert flow.continuous
    assert flow.value(flow.rho) == pytest.approx(
        poly_eval(flow.h_minus, flow.rho), abs=1e-12)
    assert abs(poly_eval(flow.h_minus, flow.rho)
               - poly_eval(flow.h_plus, flow.rho)) < 1e-12


def test_single_branch_flow_has_h():
    flow = build_h(modern_climate_params(D=0.35))
    assert flow.h is flow.h_plus
    two = build_h(neoproterozoic_params())
    with pytest.raises(ValueError):
        _ = two.h


def test_modern_budyko_equilibria_d035():
    flow = build_h(modern_climate_params(D=0.35, N=1))
    eqs = find_equilibria(flow)
    inner = interior(eqs)
    assert [e.stability for e in inner] == [UNSTABLE, STABLE]
    assert inner[0].eta == pytest.approx(0.2116929, abs=1e-5)
    assert inner[1].eta == pytest.approx(0.8370013, abs=1e-5)
    assert inner[1].global_mean == pytest.approx(10.8516, abs=1e-3)
    # The snowball boundary attracts (flow points outward at eta = 0) but
    # the ice-free state does not at this diffusivity.
    stabilities = {e.stability for e in eqs}
    assert BOUNDARY_SNOWBALL in stabilities
    assert BOUNDARY_ICE_FREE not in stabilities


def test_root_certification():
    for params in (modern_climate_params(D=0.35, N=1),
                   modern_climate_params(D=0.394, N=1),
                   neoproterozoic_params(N=2)):
        flow = build_h(params)
        for eq in interior(find_equilibria(flow)):
            assert abs(flow.value(eq.eta)) <= 1e-10
            assert flow.value(eq.eta - 1e-6) * flow.value(eq.eta + 1e-6) < 0


def test_sici_appears_at_calibrated_diffusivity():
    # D = 0.394: three interior roots, (unstable, stable, unstable) from
    # equator to pole; the northernmost is the small unstable cap.
    flow = build_h(modern_climate_params(D=0.394, N=1))
    inner = interior(find_equilibria(flow))
    assert [e.stability for e in inner] == [UNSTABLE, STABLE, UNSTABLE]
    assert inner[1].eta == pytest.approx(0.94, abs=0.01)
    # D = 0.35: no small unstable cap.
    inner35 = interior(find_equilibria(build_h(
        modern_climate_params(D=0.35, N=1))))
    assert len(inner35) == 2


def test_efficient_transport_removes_small_cap():
    flow = build_h(modern_climate_params(D=0.45, N=1))
    eqs = find_equilibria(flow)
    assert all(e.stability != STABLE for e in interior(eqs))
    # Ice-free state attracts: h > 0 near eta = 1.
    assert flow.value(1.0) > 0.0
    assert any(e.stability == BOUNDARY_ICE_FREE for e in eqs)


def test_solve_d_for_target():
    p = modern_climate_params(D=0.35, N=1)
    d_star = solve_D_for_target(p, 0.94)
    assert d_star == pytest.approx(0.394, abs=0.002)
    assert slow_manifold_temps(p.with_(D=d_star), 0.94)[0] == pytest.approx(
        14.6, abs=0.2)


def test_solve_d_degenerate_and_no_solution():
    p = modern_climate_params(D=0.35, N=1)
    # p_2 vanishes at 1/sqrt(3), removing all D dependence from h there.
    eta0 = 1.0 / np.sqrt(3.0)
    with pytest.raises(NoSolutionError):
        solve_D_for_target(p, eta0)
    t_crit = float(slow_manifold_temps(p, eta0)[0])
    with pytest.raises(DegenerateRootError):
        solve_D_for_target(p.with_(T_c=t_crit), eta0)
    with pytest.raises(ValueError):
        solve_D_for_target(modern_climate_params(transport=RELAX_TO_MEAN),
                           0.94)


def test_slow_manifold_temperatures():
    p = modern_climate_params(D=0.35, N=1)
    # Closed forms: f_0(1) = (Q(1 - alpha1) - A)/B, f_0(0) with alpha2.
    assert slow_manifold_temps(p, 1.0)[0] == pytest.approx(
        (343.0 * 0.68 - 202.0) / 1.9, abs=1e-12)
    assert slow_manifold_temps(p, 0.0)[0] == pytest.approx(
        (343.0 * 0.38 - 202.0) / 1.9, abs=1e-12)
    with pytest.raises(ValueError):
        slow_manifold_temps(modern_climate_params(transport=RELAX_TO_MEAN),
                            0.5)


def test_jormungand_diffusive_structure_n1():
    flow = build_h(neoproterozoic_params(N=1))
    eqs = interior(find_equilibria(flow))
    below = [e for e in eqs if e.eta < 0.35]
    above = [e for e in eqs if e.eta >= 0.35]
    assert len(below) == 1 and below[0].stability == STABLE
    assert below[0].eta == pytest.approx(0.24596, abs=1e-4)
    assert [e.stability for e in above] == [UNSTABLE, STABLE]
    assert above[0].eta == pytest.approx(0.42403, abs=1e-4)
    assert above[1].eta == pytest.approx(0.58366, abs=1e-4)


@pytest.mark.parametrize("N", [2, 5])
def test_jormungand_diffusive_higher_modes(N):
    # Higher resolution cools the model: only the tropical state survives.
    flow = build_h(neoproterozoic_params(N=N))
    eqs = interior(find_equilibria(flow))
    stable = [e for e in eqs if e.stability == STABLE]
    assert len(stable) == 1
    assert 0.0 < stable[0].eta < 0.35
    above = [e for e in eqs if e.eta > 0.35]
    assert not above


def test_relax_budyko_computed_roots():
    # Frozen values for the cubic's two roots with C = 3.09.
    flow = build_h(modern_climate_params(transport=RELAX_TO_MEAN, N=1))
    inner = interior(find_equilibria(flow))
    assert [e.stability for e in inner] == [UNSTABLE, STABLE]
    assert inner[0].eta == pytest.approx(0.2532247, abs=1e-5)
    assert inner[1].eta == pytest.approx(0.9618911, abs=1e-5)


def test_relax_quadratic_sufficiency():
    # With the quadratic insolation series, raising N leaves h unchanged.
    base = build_h(modern_climate_params(transport=RELAX_TO_MEAN, N=1))
    for N in (2, 5):
        flow = build_h(modern_climate_params(transport=RELAX_TO_MEAN, N=N))
        a = npp.polytrim(base.h, tol=0.0)
        b = npp.polytrim(flow.h, tol=0.0)
        assert len(a) == len(b)
        assert np.max(np.abs(a - b)) < 1e-12


def test_relax_higher_insolation_modes_shift_roots_slightly():
    base = interior(find_equilibria(build_h(
        modern_climate_params(transport=RELAX_TO_MEAN, N=1))))
    rich = interior(find_equilibria(build_h(
        modern_climate_params(transport=RELAX_TO_MEAN, N=5,
                              s=S_COMPUTED))))
    assert len(base) == len(rich) == 2
    shifts = [abs(a.eta - b.eta) for a, b in zip(base, rich)]
    # Qualitative structure is unchanged; the computed shifts are about
    # 0.013 (unstable) and 0.031 (stable).
    assert [e.stability for e in rich] == [UNSTABLE, STABLE]
    assert shifts[0] == pytest.approx(0.0126, abs=2e-3)
    assert shifts[1] == pytest.approx(0.0308, abs=2e-3)


def test_relax_jormungand_filippov_structure():
    p = neoproterozoic_params(transport=RELAX_TO_MEAN, N=1)
    flow = build_h(p)
    assert not flow.continuous
    lo, hi = filippov_interval(flow)
    assert lo == pytest.approx(poly_eval(flow.h_plus, flow.rho))
    assert hi == pytest.approx(poly_eval(flow.h_minus, flow.rho))
    assert lo < 0.0 < hi
    assert has_sliding_equilibrium(flow)
    eqs = find_equilibria(flow)
    sliding = [e for e in eqs if e.stability == SLIDING_AT_RHO]
    assert len(sliding) == 1 and sliding[0].eta == flow.rho
    assert not interior(eqs)
    # Sign pattern drives every ice line to the snow line.
    etas_lo = np.linspace(0.001, flow.rho - 1e-6, 50)
    etas_hi = np.linspace(flow.rho + 1e-6, 0.999, 50)
    assert np.all(poly_eval(flow.h_minus, etas_lo) > 0.0)
    assert np.all(poly_eval(flow.h_plus, etas_hi) < 0.0)


def test_filippov_interval_requires_switching_boundary():
    with pytest.raises(ValueError):
        filippov_interval(build_h(modern_climate_params(D=0.35)))
    assert not has_sliding_equilibrium(build_h(neoproterozoic_params(N=1)))


def test_reduced_flow_matches_critical_manifold():
    # The assembled polynomial agrees with the model's ice-line
    # temperature on the critical manifold for every variant.
    cases = [
        modern_climate_params(D=0.35, N=1),
        modern_climate_params(D=0.394, N=2),
        neoproterozoic_params(N=2),
        modern_climate_params(transport=RELAX_TO_MEAN, N=1),
        neoproterozoic_params(transport=RELAX_TO_MEAN, N=1),
        neoproterozoic_params(transport=RELAX_TO_MEAN, N=3,
                              s=S_COMPUTED[:4]),
    ]
    for params in cases:
        flow = build_h(params)
        model = build_model(params)
        for eta in np.linspace(0.02, 0.98, 33):
            branch = None
            if params.albedo_kind == "jormungand":
                branch = "minus" if eta < params.albedo.rho else "plus"
            expected = model.iceline_temperature(
                model.equilibrium_state(float(eta)), branch) - params.T_c
            assert flow.value(float(eta)) == pytest.approx(expected,
                                                           abs=1e-9)


def test_computed_series_matches_fresh_projection():
    fresh = s_coefficients(beta_deg=23.5, max_mode=5)
    assert np.max(np.abs(fresh - np.array(S_COMPUTED))) < 5e-5
