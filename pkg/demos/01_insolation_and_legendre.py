"""Insolation distribution and its Legendre decomposition.

Computes the exact annual-mean insolation shape s(y) over sine-of-latitude,
projects it onto the even Legendre basis, and compares the standard
two-term truncation against the exact integral at two obliquities.

Run:  python demos/01_insolation_and_legendre.py
Writes demos/output/insolation.png
"""

from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from iceline import (  # noqa: E402
    legendre_eval,
    quadrature,
    s_coefficients,
    s_exact,
    s_quadratic,
    series_eval,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

print("Legendre coefficients of the exact insolation integral")
print("mode 2n    beta=23.5      beta=24.5")
c235 = s_coefficients(beta_deg=23.5, max_mode=5)
c245 = s_coefficients(beta_deg=24.5, max_mode=5)
for n, (a, b) in enumerate(zip(c235, c245)):
    print(f"  {2 * n:4d} {a:12.5f} {b:14.5f}")

print("\nOrthogonality spot check (quadrature of p_2m * p_2n on [0, 1]):")
for m, n in [(1, 1), (1, 2), (3, 3)]:
    val = quadrature(lambda y: legendre_eval(m, y) * legendre_eval(n, y),
                     0.0, 1.0)
    print(f"  m={m} n={n}: {val:.12f}")

ys = np.linspace(0.0, 1.0, 201)
quad = series_eval(s_quadratic(), ys)
exact235 = np.array([s_exact(float(y), 23.5) for y in ys])
exact245 = np.array([s_exact(float(y), 24.5) for y in ys])

rel235 = np.abs(quad - exact235) / exact235
rel245 = np.abs(quad - exact245) / exact245
print("\nTwo-term truncation, uniform error against the exact integral:")
print(f"  beta=23.5: max relative {rel235.max():.4f} "
      f"(absolute {np.abs(quad - exact235).max():.4f})")
print(f"  beta=24.5: max relative {rel245.max():.4f} "
      f"(absolute {np.abs(quad - exact245).max():.4f})")
print("  The 3% relative bound holds at 24.5 degrees but not at 23.5.")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ax1.plot(ys, exact235, label="exact, 23.5 deg")
ax1.plot(ys, exact245, label="exact, 24.5 deg", ls=":")
ax1.plot(ys, quad, label="two-term series", ls="--")
ax1.set_xlabel("y = sin(latitude)")
ax1.set_ylabel("s(y)")
ax1.legend()
ax2.plot(ys, 100 * rel235, label="23.5 deg")
ax2.plot(ys, 100 * rel245, label="24.5 deg", ls=":")
ax2.axhline(3.0, color="k", lw=0.5)
ax2.set_xlabel("y = sin(latitude)")
ax2.set_ylabel("relative error of the truncation [%]")
ax2.legend()
fig.tight_layout()
fig.savefig(OUT / "insolation.png", dpi=120)
print(f"\nwrote {OUT / 'insolation.png'}")
