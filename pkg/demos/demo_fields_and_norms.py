"""Fields on the torus, spectral calculus, and the norm report.

Builds a few test fields, differentiates them spectrally, applies the Riesz
transforms and the Leray projection, and prints the full norm report that
the rest of the toolkit consumes.
"""

import numpy as np

from loglimit import (
    GridSpec,
    ScalarField,
    VectorField,
    compute_norms,
    divergence,
    gradient,
    leray_project,
    riesz_transform,
)

grid = GridSpec(64)
x1, x2 = grid.coordinates()

print("== spectral calculus ==")
f = ScalarField(grid, np.sin(x1) * np.cos(x2))
g = gradient(f)
print(f"gradient of sin(x1)cos(x2): max|d1 - cos cos| = "
      f"{np.abs(g.u1.values - np.cos(x1) * np.cos(x2)).max():.2e}")

r1 = riesz_transform(ScalarField(grid, np.cos(x1)), 1)
print(f"R1(cos x1) = sin x1 up to {np.abs(r1.values - np.sin(x1)).max():.2e}")

# the two Riesz transforms compose to minus the mean-free identity
h = ScalarField(grid, np.cos(2 * x1) * np.sin(x2) + 0.3 * np.sin(3 * x2))
total = sum(riesz_transform(riesz_transform(h, k), k).values for k in (1, 2))
print(f"sum_k R_k^2 h + (h - mean h): {np.abs(total + h.values - h.mean()).max():.2e}")

print("\n== Leray projection ==")
v = VectorField(ScalarField(grid, np.sin(x1)), ScalarField.zeros(grid))
p = leray_project(v)  # a pure gradient: projects to zero
print(f"leray(sin x1, 0): max component {max(np.abs(p.u1.values).max(), np.abs(p.u2.values).max()):.2e}")
w = VectorField(ScalarField(grid, np.sin(x2)), ScalarField(grid, np.cos(2 * x1)))
pw = leray_project(w)
print(f"divergence after projection: {np.abs(divergence(pw).values).max():.2e}")

print("\n== norm report ==")
print("field                l1       l2       linf     lp_sig   bmo      hardy    llogl")
for name, vals in [
    ("cos x1", np.cos(x1)),
    ("step", np.where(x1 < np.pi, 1.0, -1.0)),
    ("gaussian bump", np.exp(-((x1 - np.pi) ** 2 + (x2 - np.pi) ** 2) / (2 * (np.pi / 8) ** 2))),
]:
    rep = compute_norms(ScalarField(grid, vals))
    print(f"{name:18s} " + " ".join(
        f"{v:8.4f}" for v in (rep.l1, rep.l2, rep.linf, rep.lp_sigma, rep.bmo, rep.hardy, rep.llogl)
    ))
