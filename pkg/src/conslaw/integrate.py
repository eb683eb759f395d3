"""Symplectic steppers for the frictionless dynamics x'' = -grad f(x)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objective import Objective


class IntegrationError(FloatingPointError):
    """A step produced a non-finite gradient or state."""

    def __init__(self, message: str, state: "PhaseState"):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class PhaseState:
    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float, ndmin=1)
        v = np.array(self.v, dtype=float, ndmin=1)
        if x.shape != v.shape or x.ndim != 1:
            raise ValueError(f"x and v must be vectors of equal length, got {x.shape} and {v.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise ValueError("phase state must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)

    @property
    def dim(self) -> int:
        return self.x.shape[0]

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.v))


@dataclass(frozen=True)
class Energy:
    kinetic: float
    potential: float

    @property
    def total(self) -> float:
        return self.kinetic + self.potential


def _grad(f: Objective, s: PhaseState, x: np.ndarray) -> np.ndarray:
    g = np.asarray(f.gradient(x), dtype=float)
    if not np.all(np.isfinite(g)):
        raise IntegrationError("non-finite gradient", s)
    return g


def _check(f: Objective, s: PhaseState, h: float):
    if not h > 0:
        raise ValueError("step size h must be positive")
    if s.dim != f.dim:
        raise ValueError(f"state has dim {s.dim}, objective has dim {f.dim}")


def _state(x, v, previous: PhaseState) -> PhaseState:
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
        raise IntegrationError("non-finite state", previous)
    return PhaseState(x, v)


def symplectic_euler_step(f: Objective, s: PhaseState, h: float) -> PhaseState:
    """Kick with the old gradient, then drift with the new velocity."""
    _check(f, s, h)
    v = s.v - h * _grad(f, s, s.x)
    x = s.x + h * v
    return _state(x, v, s)


def stormer_verlet_step(f: Objective, s: PhaseState, h: float) -> PhaseState:
    """Half kick, drift, half kick. Two gradient evaluations per step."""
    _check(f, s, h)
    v_half = s.v - 0.5 * h * _grad(f, s, s.x)
    x = s.x + h * v_half
    if not np.all(np.isfinite(x)):
        raise IntegrationError("non-finite state", s)
    v = v_half - 0.5 * h * _grad(f, s, x)
    return _state(x, v, s)


STEPPERS = {"euler": symplectic_euler_step, "verlet": stormer_verlet_step}


def energy(f: Objective, s: PhaseState) -> Energy:
    return Energy(kinetic=0.5 * float(s.v @ s.v), potential=float(f.value(s.x)))


def integrate(f: Objective, s: PhaseState, h: float, n: int, scheme: str = "euler"):
    """Return the ``n + 1`` states visited by ``n`` steps of ``scheme``."""
    step = STEPPERS[scheme]
    states = [s]
    for _ in range(n):
        s = step(f, s, h)
        states.append(s)
    return states
