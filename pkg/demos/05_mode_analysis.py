"""
Why the resets come when they do
================================

Near a minimum one symplectic Euler step is a linear map that splits into
independent 2x2 rotations, one per Hessian eigenvalue.  Each rotates by a
fixed angle per step, which sets the time to its first speed peak.
"""
import numpy as np

from conslaw import spectral

A = np.diag([1.0, 0.25, 1e-2, 1e-4])
h = 1.0
for row in spectral.mode_table(A, h):
    print(
        f"omega={row['omega']:<6.3g} theta={row['theta']:.5f} phi={row['phi']:.5f} "
        f"first reset ~ {row['first_reset_estimate']:.1f} steps"
    )

# The k-step power has a closed form; compare it with repeated multiplication.
mb = spectral.mode_block(0.3, h)
k = 500
err = np.abs(spectral.block_power_closed_form(mb, k) - spectral.block_power_brute_force(mb, k)).max()
print(f"closed form vs brute force at k={k}: {err:.1e}")

# At h omega = 1 the rotation angle is pi/3, so three steps flip the mode.
print(np.round(spectral.block_power_closed_form(spectral.mode_block(1.0, 1.0), 3), 12))
