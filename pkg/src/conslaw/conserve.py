"""Energy-based minimisation and minima detection on frictionless trajectories.

* :func:`ade_minimize` runs symplectic Euler and throws the kinetic energy
  away whenever the speed stops growing, which turns the conservative
  dynamics into a descent method.
* :func:`ec_detect` runs the same dynamics without dissipation and records
  positions where the speed peaks; these sit close to the local minima the
  trajectory passes over.
* :func:`combined_search` chains the two and compares the minima found.
"""
from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .integrate import STEPPERS, IntegrationError, PhaseState
from .objective import DomainError, Objective, _as_point
from .trace import Recorder, RunTrace

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    h: float
    maxiter: int = 100_000
    eps: float = 1e-6
    v0: Optional[np.ndarray] = None
    scheme: str = "euler"
    keep_positions: bool = False

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.maxiter < 1:
            raise ValueError("maxiter must be at least 1")
        if self.scheme not in STEPPERS:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.v0 is not None:
            object.__setattr__(self, "v0", np.array(self.v0, dtype=float, ndmin=1))

    def initial_velocity(self, dim: int) -> Optional[np.ndarray]:
        if self.v0 is None:
            return None
        v0 = self.v0
        if v0.shape == (1,) and dim > 1:
            v0 = np.full(dim, v0[0])
        if v0.shape != (dim,):
            raise ValueError(f"v0 has shape {v0.shape}, expected ({dim},)")
        return v0


def ade_minimize(f: Objective, x0, cfg: RunConfig) -> RunTrace:
    """Artificially dissipating energy: symplectic Euler with velocity resets.

    Each iteration forms the trial velocity ``v - h grad f(x)``; if it is no
    faster than the current one the velocity is zeroed instead.  The
    position then moves by ``h v``, so a reset iteration leaves ``x`` alone.
    Non-finite values end the run with ``termination == "diverged"``.
    """
    x = _as_point(x0, f.dim).copy()
    v0 = cfg.initial_velocity(f.dim)
    if v0 is not None and np.any(v0 != 0):
        raise ValueError("ade_minimize starts at rest; v0 must be zero")
    h = cfg.h
    v = np.zeros_like(x)
    speed = 0.0
    rec = Recorder(min(cfg.maxiter, 4096), f.dim, cfg.keep_positions)
    termination = "maxiter"

    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(cfg.maxiter + 1):
            try:
                fx, g = f.value_and_gradient(x)
            except DomainError:
                termination = "diverged"
                break
            gn = float(np.linalg.norm(g))
            if not (math.isfinite(fx) and math.isfinite(gn)):
                termination = "diverged"
                break
            if gn <= cfg.eps:
                termination = "converged"
                break
            if k == cfg.maxiter:
                break
            v_iter = v - h * g
            trial = float(np.linalg.norm(v_iter))
            reset = trial <= speed
            if reset:
                v = np.zeros_like(x)
                speed = 0.0
            else:
                x_new = x + h * v_iter
                if not np.all(np.isfinite(x_new)):
                    termination = "diverged"
                    rec.add(fx, gn, trial, False, x)
                    break
                v, speed, x_prev, x = v_iter, trial, x, x_new
            rec.add(fx, gn, speed, reset, x if reset else x_prev)

    if termination == "diverged":
        state = PhaseState(x, v) if np.all(np.isfinite(v)) else PhaseState(x, np.zeros_like(x))
        return rec.finish(state, math.nan, math.nan, termination, "ade")
    return rec.finish(PhaseState(x, v), fx, gn, termination, "ade")


# --------------------------------------------------------------------------
# detection


@dataclass(frozen=True)
class Candidate:
    position: np.ndarray
    step_index: int
    f: float


@dataclass
class CandidateSet:
    candidates: list[Candidate]
    source_run: RunConfig
    x0: np.ndarray
    v0: np.ndarray
    steps: int
    diverged: bool = False

    def __len__(self):
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    @property
    def positions(self) -> np.ndarray:
        return np.array([c.position for c in self.candidates]).reshape(len(self), -1)

    def deduplicated(self, tol: float) -> list[Candidate]:
        """Drop candidates within ``tol`` of an earlier kept one (keeps the lower f)."""
        kept: list[Candidate] = []
        for c in self.candidates:
            for i, other in enumerate(kept):
                if np.linalg.norm(c.position - other.position) < tol:
                    if c.f < other.f:
                        kept[i] = c
                    break
            else:
                kept.append(c)
        return kept


def default_detection_velocity(
    f: Objective, x0, radius: float = 1.0, probes: int = 100, seed: int = 0
) -> np.ndarray:
    """Initial velocity with kinetic energy equal to the local spread of f.

    ``probes`` points are drawn uniformly from the box ``x0 +- radius``; the
    velocity has magnitude ``sqrt(2 (max f - min f))`` and points at the
    lowest probe.
    """
    x0 = _as_point(x0, f.dim)
    rng = np.random.default_rng(seed)
    pts = x0 + radius * rng.uniform(-1.0, 1.0, size=(probes, f.dim))
    vals = np.array([f.value(p) for p in pts])
    margin = float(vals.max() - vals.min())
    direction = pts[np.argmin(vals)] - x0
    norm = np.linalg.norm(direction)
    if margin <= 0 or norm == 0:
        raise ValueError("cannot build a default detection velocity: flat probe set")
    return math.sqrt(2.0 * margin) * direction / norm


def ec_detect(
    f: Objective, x0, cfg: RunConfig, n: int, seed: int = 0
) -> CandidateSet:
    """Integrate ``n`` undamped steps and record the speed peaks.

    Index ``k`` in ``1..n-1`` is a candidate when ``|v_k| >= |v_{k+1}|`` and
    ``|v_k| >= |v_{k-1}|``; within a run of equal speeds only the first
    index counts.  ``cfg.v0`` of ``None`` falls back to
    :func:`default_detection_velocity` with ``seed``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    x0 = _as_point(x0, f.dim)
    v0 = cfg.initial_velocity(f.dim)
    if v0 is None:
        v0 = default_detection_velocity(f, x0, seed=seed)
    step = STEPPERS[cfg.scheme]
    state = PhaseState(x0, v0)
    xs = [state.x]
    speeds = [state.speed]
    diverged = False
    for _ in range(n):
        try:
            state = step(f, state, cfg.h)
        except (IntegrationError, DomainError) as exc:
            log.warning("detection stopped after %d steps: %s", len(xs) - 1, exc)
            diverged = True
            break
        xs.append(state.x)
        speeds.append(state.speed)

    found = [Candidate(xs[k], k, float(f.value(xs[k]))) for k in speed_peaks(speeds)]
    return CandidateSet(found, cfg, x0, v0, len(xs) - 1, diverged)


def speed_peaks(speeds) -> list[int]:
    """Interior indices where the speed is a (non-strict) local maximum.

    A run of equal values contributes only its first index.
    """
    out = []
    for k in range(1, len(speeds) - 1):
        s = speeds[k]
        if s >= speeds[k + 1] and s >= speeds[k - 1] and s != speeds[k - 1]:
            out.append(k)
    return out


# --------------------------------------------------------------------------
# combined search


class NoCandidatesError(RuntimeError):
    pass


@dataclass(frozen=True)
class LocalRun:
    start_index: int
    candidate: Candidate
    trace: RunTrace

    @property
    def position(self) -> np.ndarray:
        return self.trace.final_state.x

    @property
    def f(self) -> float:
        return self.trace.final_f


@dataclass
class CombinedResult:
    x: np.ndarray
    f: float
    minima: list[LocalRun]
    runs: list[LocalRun]
    detections: list[CandidateSet]
    warnings: list[str] = field(default_factory=list)


def combined_search(
    f: Objective,
    starts: Sequence,
    cfg_detect: RunConfig,
    n: int,
    cfg_local: RunConfig,
    workers: int = 1,
    merge_tol: Optional[float] = None,
) -> CombinedResult:
    """Detect candidate basins from every start, polish each with ADE, keep the best.

    ``minima`` lists the distinct local minima (results closer than
    ``merge_tol``, default ``1e-4 sqrt(dim)``, are merged keeping the lower
    value); ``runs`` keeps every ADE result in candidate order.  Diverged
    ADE runs are reported in ``warnings`` and excluded.
    """
    if len(starts) == 0:
        raise ValueError("need at least one start")
    detections = [ec_detect(f, s, cfg_detect, n) for s in starts]
    jobs = [(i, c) for i, det in enumerate(detections) for c in det]
    if not jobs:
        raise NoCandidatesError("no candidates detected from any start")

    local = replace(cfg_local, v0=None)

    def polish(job):
        i, c = job
        return LocalRun(i, c, ade_minimize(f, c.position, local))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            runs = list(pool.map(polish, jobs))
    else:
        runs = [polish(j) for j in jobs]

    notes = []
    good = []
    for r in runs:
        if r.trace.termination == "diverged":
            msg = f"ADE diverged from candidate at step {r.candidate.step_index} of start {r.start_index}"
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
            notes.append(msg)
        else:
            good.append(r)
    if not good:
        raise NoCandidatesError("every local run diverged")

    tol = 1e-4 * math.sqrt(f.dim) if merge_tol is None else merge_tol
    minima: list[LocalRun] = []
    for r in good:
        for i, m in enumerate(minima):
            if np.linalg.norm(r.position - m.position) < tol:
                if r.f < m.f:
                    minima[i] = r
                break
        else:
            minima.append(r)
    best = min(minima, key=lambda r: r.f)
    return CombinedResult(best.position.copy(), best.f, minima, runs, detections, notes)


# --------------------------------------------------------------------------
# step-size helpers


def iteration_estimate(L: float, mu: float) -> float:
    """Rough count of ADE steps before the first reset, ``pi/2 sqrt(L/mu)``."""
    if not 0 < mu <= L:
        raise ValueError("need 0 < mu <= L")
    return 0.5 * math.pi * math.sqrt(L / mu)


def default_step_size(f: Objective, x) -> float:
    """``1 / sqrt(L)`` with ``L`` the largest Hessian eigenvalue magnitude at ``x``."""
    if f.hessian is None:
        raise ValueError("objective has no Hessian; pass h explicitly")
    H = np.asarray(f.hessian(_as_point(x, f.dim)))
    L = float(np.max(np.abs(np.linalg.eigvalsh(H))))
    if L == 0:
        raise ValueError("zero curvature at x; pass h explicitly")
    return 1.0 / math.sqrt(L)
