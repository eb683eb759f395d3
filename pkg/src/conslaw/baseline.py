"""Gradient descent, Polyak heavy ball and Nesterov's accelerated gradient."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .integrate import PhaseState
from .objective import Objective, _as_point
from .trace import DivergenceError, Recorder, RunTrace


@dataclass(frozen=True)
class BaselineConfig:
    h: float
    maxiter: int = 10_000
    eps: float = 1e-6
    gamma: Optional[float] = None
    kappa: Optional[float] = None
    keep_positions: bool = False

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.maxiter < 1:
            raise ValueError("maxiter must be at least 1")
        if self.gamma is not None and not 0 <= self.gamma < 1:
            raise ValueError("gamma must lie in [0, 1)")
        if self.kappa is not None and not 0 <= self.kappa <= 1:
            raise ValueError("kappa must lie in [0, 1]")


def optimal_heavy_ball_gamma(kappa: float) -> float:
    r = math.sqrt(kappa)
    return (1 - r) / (1 + r)


def nesterov_alpha_next(alpha: float, kappa: float) -> float:
    """Root in (0, 1] of ``a^2 = (1 - a) alpha^2 + a kappa``."""
    p = alpha * alpha - kappa
    disc = math.sqrt(p * p + 4.0 * alpha * alpha)
    # pick the cancellation-free form of the positive root
    if p >= 0:
        return 2.0 * alpha * alpha / (p + disc)
    return 0.5 * (disc - p)


def nesterov_alpha_sequence(kappa: float, n: int, alpha0: Optional[float] = None) -> np.ndarray:
    """First ``n + 1`` terms of the alpha recurrence.

    Starts from ``sqrt(kappa)`` (constant momentum) when ``kappa > 0`` and
    from 1 otherwise, unless ``alpha0`` is given.
    """
    if alpha0 is None:
        alpha0 = math.sqrt(kappa) if kappa > 0 else 1.0
    out = np.empty(n + 1)
    out[0] = alpha0
    for k in range(n):
        out[k + 1] = nesterov_alpha_next(out[k], kappa)
    return out


def nesterov_gamma(alpha: float, alpha_next: float) -> float:
    return alpha * (1 - alpha) / (alpha * alpha + alpha_next)


def _run(f: Objective, x0, cfg: BaselineConfig, step, method: str) -> RunTrace:
    x = _as_point(x0, f.dim).copy()
    rec = Recorder(min(cfg.maxiter, 4096), f.dim, cfg.keep_positions)
    v = np.zeros_like(x)

    def fail(msg):
        state = PhaseState(x, v)
        fx, g = f.value_and_gradient(x)
        trace = rec.finish(state, fx, np.linalg.norm(g), "diverged", method)
        raise DivergenceError(f"{method}: {msg} at iteration {rec.n}", trace)

    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(cfg.maxiter + 1):
            fx, g = f.value_and_gradient(x)
            gn = float(np.linalg.norm(g))
            if not (math.isfinite(fx) and math.isfinite(gn)):
                fail("non-finite objective")
            if gn <= cfg.eps or k == cfg.maxiter:
                break
            x_new = step(k, x, g)
            if not np.all(np.isfinite(x_new)):
                fail("non-finite iterate")
            v_new = (x_new - x) / cfg.h
            rec.add(fx, gn, float(np.linalg.norm(v_new)), False, x)
            x, v = x_new, v_new
    termination = "converged" if gn <= cfg.eps else "maxiter"
    return rec.finish(PhaseState(x, v), fx, gn, termination, method)


def gradient_descent(f: Objective, x0, cfg: BaselineConfig) -> RunTrace:
    h = cfg.h
    return _run(f, x0, cfg, lambda k, x, g: x - h * g, "gd")


def heavy_ball(f: Objective, x0, cfg: BaselineConfig) -> RunTrace:
    if cfg.gamma is None:
        raise ValueError("heavy ball needs a momentum coefficient gamma")
    h, gamma = cfg.h, cfg.gamma
    prev = [_as_point(x0, f.dim).copy()]

    def step(k, x, g):
        x_new = x - h * g + gamma * (x - prev[0])
        prev[0] = x
        return x_new

    return _run(f, x0, cfg, step, "heavy-ball")


def nesterov_agd(f: Objective, x0, cfg: BaselineConfig) -> RunTrace:
    """Nesterov's scheme with ``1/L`` replaced by ``cfg.h``.

    ``cfg.kappa`` selects the strongly convex parameter rule; without it the
    ``kappa = 0`` recurrence is used.
    """
    h = cfg.h
    kappa = cfg.kappa or 0.0
    alpha = [math.sqrt(kappa) if kappa > 0 else 1.0]
    y_prev = [_as_point(x0, f.dim).copy()]

    def step(k, x, g):
        a = alpha[0]
        a_next = nesterov_alpha_next(a, kappa)
        gamma = nesterov_gamma(a, a_next)
        y = x - h * g
        x_new = y + gamma * (y - y_prev[0])
        y_prev[0] = y
        alpha[0] = a_next
        return x_new

    return _run(f, x0, cfg, step, "nesterov")
