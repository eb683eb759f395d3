"""Optimisation with frictionless Hamiltonian dynamics.

Local minima are found by discarding kinetic energy whenever the speed
stops growing; several minima are located by recording speed peaks along
undamped trajectories.
"""
from .baseline import BaselineConfig, gradient_descent, heavy_ball, nesterov_agd
from .conserve import (
    CandidateSet,
    RunConfig,
    ade_minimize,
    combined_search,
    ec_detect,
    iteration_estimate,
)
from .integrate import Energy, PhaseState, energy, stormer_verlet_step, symplectic_euler_step
from .objective import Objective
from .trace import DivergenceError, RunTrace

__version__ = "0.1.0"
