"""
Global search: detect, then polish
==================================

Detection finds rough basin locations from a few starts; ADE then settles
each one into its local minimum, and the lowest wins.
"""
import numpy as np

from conslaw import conserve, objective

f = objective.styblinski_tang(10)
starts = [np.full(10, 5.0), np.tile([5.0, -5.0], 5)]
res = conserve.combined_search(
    f, starts, conserve.RunConfig(h=0.01, v0=np.zeros(10)), 1000, conserve.RunConfig(h=0.01)
)
print("local minima:", sorted(round(m.f, 4) for m in res.minima))
print(f"global: f = {res.f:.4f} at x = {res.x[0]:.6f} (all coordinates)")

for m in (5, 7, 10):
    res = conserve.combined_search(
        objective.shekel(m), [np.full(4, 3.0)], conserve.RunConfig(h=0.01, v0=np.zeros(4)), 1000,
        conserve.RunConfig(h=0.01),
    )
    print(f"shekel m={m:>2}: values {[round(r.f, 4) for r in res.runs]}, best at {np.round(res.x, 4)}")
