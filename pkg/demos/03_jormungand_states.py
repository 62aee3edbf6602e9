"""Tropical ice lines with the three-band (bare-ice) albedo.

With bare, darker ice equatorward of the snow line rho, the reduced flow
has two branches h- (ice line below rho) and h+ (above).  Under diffusive
transport they glue continuously and support a stable equilibrium with
the ice edge in the tropics; with more modes it becomes the only stable
state.  Under relaxation transport the branches disagree at rho and the
ice line can pin there (sliding state of the differential inclusion).

Run:  python demos/03_jormungand_states.py
Writes demos/output/jormungand_h.png
"""

from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from iceline import (  # noqa: E402
    RELAX_TO_MEAN,
    build_h,
    filippov_interval,
    find_equilibria,
    has_sliding_equilibrium,
    jacobian_gap_at_sigma,
    neoproterozoic_params,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.2))

print("Diffusive transport, glued flow (continuous at rho = 0.35):")
for N, style in [(1, "-"), (2, "--"), (5, ":")]:
    params = neoproterozoic_params(N=N)
    flow = build_h(params)
    lo = np.linspace(0.0, flow.rho, 150)
    hi = np.linspace(flow.rho, 1.0, 250)
    line, = ax1.plot(lo, flow.value(lo), style, label=f"N = {N}")
    ax1.plot(hi, flow.value(hi), style, color=line.get_color())
    for eq in find_equilibria(flow):
        if eq.stability in ("stable", "unstable"):
            print(f"  N={N}: eta = {eq.eta:.4f} ({eq.stability})")
ax1.axvline(0.35, color="gray", lw=0.5)
ax1.axhline(0.0, color="k", lw=0.5)
ax1.set_title("diffusive")
ax1.set_xlabel("eta")
ax1.set_ylabel("h(eta) [C]")
ax1.legend()

print("\nThe glued field is continuous but not smooth at the snow line:")
print(f"  one-sided df0/deta mismatch = "
      f"{jacobian_gap_at_sigma(neoproterozoic_params(N=1)):.3f} C")

print("\nRelaxation transport (branches disagree at rho):")
params = neoproterozoic_params(transport=RELAX_TO_MEAN, N=1)
flow = build_h(params)
lo = np.linspace(0.0, flow.rho, 150)
hi = np.linspace(flow.rho, 1.0, 250)
ax2.plot(lo, np.polynomial.polynomial.polyval(lo, flow.h_minus), "-",
         label="h- (eta < rho)")
ax2.plot(hi, np.polynomial.polynomial.polyval(hi, flow.h_plus), "-",
         label="h+ (eta > rho)")
ax2.axvline(0.35, color="gray", lw=0.5)
ax2.axhline(0.0, color="k", lw=0.5)
ax2.set_title("relaxation to the mean")
ax2.set_xlabel("eta")
ax2.legend()

v_lo, v_hi = filippov_interval(flow)
print(f"  admissible velocities at rho: [{v_lo:.3f}, {v_hi:.3f}]")
print(f"  sliding (pinned) state at rho: {has_sliding_equilibrium(flow)}")
print("  every initial ice line reaches the snow line in finite time and "
      "stays there.")

fig.tight_layout()
fig.savefig(OUT / "jormungand_h.png", dpi=120)
print(f"\nwrote {OUT / 'jormungand_h.png'}")
