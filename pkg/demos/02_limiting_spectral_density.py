"""Limiting spectral densities from the Silverstein fixed point.

Solves the companion-transform equation over a grid and inverts it to the
density; overlays the closed-form Marchenko-Pastur curve for the identity
population, and shows a two-atom population where no closed form exists.
Writes a CSV of the curves (and a PNG when matplotlib is importable).
"""

import os

import numpy as np

from hdwn import SpectralDistribution, lsd_density, mp_density, solve_silverstein

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT_DIR, exist_ok=True)

delta1 = SpectralDistribution.point_mass(1.0)
two_atom = SpectralDistribution.discrete({0.5: 0.5, 1.5: 0.5})

print("=== solved points of the fixed-point equation ===")
for z in (2j, -1 + 1e-6j, 3 + 0.5j):
    pt = solve_silverstein(z, 0.5, delta1)
    print(f"z={z}:  m={pt.m:.6f}  m_bar={pt.m_bar:.6f}  residual={pt.residual:.1e}")

print()
print("=== density curves ===")
grid = np.linspace(0.01, 4.6, 200)
curves = {
    "mp_closed_form": mp_density(grid, 1.0),
    "solver_c1_identity": np.array([lsd_density(x, 1.0, delta1) for x in grid]),
    "solver_c05_two_atom": np.array([lsd_density(x, 0.5, two_atom) for x in grid]),
}
dev = np.abs(curves["solver_c1_identity"] - curves["mp_closed_form"]).max()
print(f"solver vs closed-form MP density, max deviation on the grid: {dev:.2e}")

csv_path = os.path.join(OUT_DIR, "densities.csv")
with open(csv_path, "w") as fh:
    fh.write("x," + ",".join(curves) + "\n")
    for i, x in enumerate(grid):
        fh.write(f"{x!r}," + ",".join(repr(float(c[i])) for c in curves.values()) + "\n")
print(f"wrote {csv_path}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(grid, curves["mp_closed_form"], "k-", lw=2, label="MP closed form (c=1)")
    ax.plot(grid, curves["solver_c1_identity"], "r--", label="solver (c=1, identity)")
    ax.plot(grid, curves["solver_c05_two_atom"], "b-", label="solver (c=0.5, two-atom)")
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend()
    fig.tight_layout()
    png_path = os.path.join(OUT_DIR, "densities.png")
    fig.savefig(png_path, dpi=120)
    print(f"wrote {png_path}")
except ImportError:
    print("matplotlib not available; skipped the plot")
