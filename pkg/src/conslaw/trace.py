"""Per-iteration run records shared by the baselines and the conservation solvers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .integrate import PhaseState

Termination = Literal["converged", "maxiter", "diverged"]


@dataclass
class RunTrace:
    """Columns of the iteration stream plus the final state.

    Row ``k`` describes iteration ``k``: the objective value and gradient norm
    at the iterate entering it, the speed after the velocity update and
    whether that update was a reset.  ``final_f``/``final_grad_norm`` belong
    to ``final_state``, which has no row of its own.
    """

    k: np.ndarray
    f: np.ndarray
    grad_norm: np.ndarray
    v_norm: np.ndarray
    reset: np.ndarray
    final_state: PhaseState
    final_f: float
    final_grad_norm: float
    termination: Termination
    positions: Optional[np.ndarray] = None
    method: str = ""

    @property
    def iterations(self) -> int:
        return int(self.k.shape[0])

    @property
    def converged(self) -> bool:
        return self.termination == "converged"

    @property
    def reset_indices(self) -> np.ndarray:
        return np.flatnonzero(self.reset)


class DivergenceError(FloatingPointError):
    """A baseline produced a non-finite iterate; ``trace`` holds the finite prefix."""

    def __init__(self, message: str, trace: RunTrace):
        super().__init__(message)
        self.trace = trace


class Recorder:
    """Growable column store so million-step runs avoid per-row objects."""

    def __init__(self, capacity: int = 1024, dim: int = 0, keep_positions: bool = False):
        capacity = max(16, capacity)
        self.n = 0
        self.f = np.empty(capacity)
        self.g = np.empty(capacity)
        self.v = np.empty(capacity)
        self.r = np.zeros(capacity, dtype=bool)
        self.x = np.empty((capacity, dim)) if keep_positions else None

    def _grow(self):
        size = 2 * self.f.shape[0]
        for name in ("f", "g", "v", "r"):
            old = getattr(self, name)
            new = np.zeros(size, dtype=old.dtype)
            new[: self.n] = old[: self.n]
            setattr(self, name, new)
        if self.x is not None:
            new = np.empty((size, self.x.shape[1]))
            new[: self.n] = self.x[: self.n]
            self.x = new

    def add(self, f: float, g: float, v: float, reset: bool = False, x=None):
        if self.n == self.f.shape[0]:
            self._grow()
        i = self.n
        self.f[i] = f
        self.g[i] = g
        self.v[i] = v
        self.r[i] = reset
        if self.x is not None:
            self.x[i] = x
        self.n += 1

    def finish(self, state, final_f, final_g, termination, method="") -> RunTrace:
        n = self.n
        return RunTrace(
            k=np.arange(n),
            f=self.f[:n].copy(),
            grad_norm=self.g[:n].copy(),
            v_norm=self.v[:n].copy(),
            reset=self.r[:n].copy(),
            final_state=state,
            final_f=float(final_f),
            final_grad_norm=float(final_g),
            termination=termination,
            positions=None if self.x is None else self.x[:n].copy(),
            method=method,
        )
