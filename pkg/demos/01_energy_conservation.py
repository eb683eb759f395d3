"""
Energy along a frictionless trajectory
======================================

Two symplectic steppers on a single harmonic mode.  Neither conserves the
energy exactly, but both keep it in a narrow band forever instead of letting
it drift.
"""
import numpy as np

from conslaw import objective, integrate

# f(x) = x^2 / 2, so the exact motion is x(t) = cos t with energy 1/2
f = objective.quadratic(objective.diagonal_quadratic([1.0]))
start = integrate.PhaseState([1.0], [0.0])
h, n = 0.1, 5_000

for scheme in ("euler", "verlet"):
    states = integrate.integrate(f, start, h, n, scheme=scheme)
    H = np.array([integrate.energy(f, s).total for s in states])
    print(f"{scheme:>6}: energy stays in [{H.min():.6f}, {H.max():.6f}] over {n} steps")

# The band width scales like h for symplectic Euler and h^2 for Verlet.
for h in (0.2, 0.1, 0.05):
    widths = []
    for scheme in ("euler", "verlet"):
        H = [integrate.energy(f, s).total for s in integrate.integrate(f, start, h, 2000, scheme=scheme)]
        widths.append(max(H) - min(H))
    print(f"h={h:<5} band width euler {widths[0]:.2e}  verlet {widths[1]:.2e}")
