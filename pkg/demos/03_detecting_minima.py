"""
Finding basins from speed peaks
===============================

Without dissipation a trajectory with enough energy rolls over every
barrier.  The speed peaks at the bottom of each well it crosses, so the
peaks mark candidate minima.
"""
import numpy as np

from conslaw import conserve, objective

f = objective.piecewise_cosine_1d()
# f(0) equals the barrier height, so a small push carries the particle over both
found = conserve.ec_detect(f, [0.0], conserve.RunConfig(h=0.1, v0=[0.2]), 180)
for c in found:
    print(f"step {c.step_index:>3}: x = {c.position[0] / np.pi:.3f} pi, f = {c.f:+.4f}")

# A linear slope has no minimum and the speed never turns around.
flat = conserve.ec_detect(objective.linear([1.0]), [0.0], conserve.RunConfig(h=0.1, v0=[1.0]), 180)
print(f"linear objective: {len(flat)} candidates")

# Starting at rest in a two-dimensional landscape works the same way.
bowl = objective.sine_bowl_2d()
found = conserve.ec_detect(bowl, [2.0, 0.0], conserve.RunConfig(h=0.1, v0=[0.0, 0.0]), 23)
print("sine bowl candidates:", [(c.step_index, np.round(c.position, 3).tolist()) for c in found])
