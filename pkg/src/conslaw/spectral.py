"""Linearised analysis of symplectic Euler around a minimum.

Near a minimum with Hessian ``A`` one step maps ``(y, v)`` linearly through
``M = [[I - h^2 A, h I], [-h A, I]]``.  Rotating into the eigenbasis of
``A`` and interleaving coordinates splits ``M`` into 2x2 blocks, one per
eigenfrequency ``omega`` (``omega^2`` an eigenvalue of ``A``).  Each block
is a rotation in disguise with phase advance ``theta`` per step and has a
closed-form k-th power in terms of ``theta`` and the auxiliary angle
``phi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class TransferMatrix:
    M: np.ndarray
    h: float
    A: np.ndarray

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class ModeBlock:
    """One 2x2 block. ``theta``/``phi`` are ``None`` unless ``0 < h omega < 2``."""

    omega: float
    h: float
    theta: Optional[float]
    phi: Optional[float]
    T: np.ndarray

    @property
    def h_omega(self) -> float:
        return self.h * self.omega

    @property
    def is_drift(self) -> bool:
        return self.omega == 0.0


def _symmetric_eig(A: np.ndarray):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("A must be symmetric")
    try:
        lam, U = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"eigen-decomposition failed: {exc}") from exc
    if np.any(lam < -1e-12):
        raise ValueError("A must be positive semidefinite")
    return np.maximum(lam, 0.0), U


def build_transfer(A, h: float) -> TransferMatrix:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if not h > 0:
        raise ValueError("h must be positive")
    if A.shape[0] != A.shape[1] or not np.array_equal(A, A.T):
        raise ValueError("A must be a symmetric square matrix")
    n = A.shape[0]
    eye = np.eye(n)
    M = np.block([[eye - h * h * A, h * eye], [-h * A, eye]])
    return TransferMatrix(M, h, A)


def linearized_step(A, h: float, y, v):
    """One symplectic Euler step on ``f(y) = 1/2 y^T A y``."""
    v_new = v - h * (A @ y)
    return y + h * v_new, v_new


def mode_matrix(omega: float, h: float) -> np.ndarray:
    w2 = omega * omega
    return np.array([[1.0 - w2 * h * h, h], [-w2 * h, 1.0]])


def _angles(omega: float, h: float):
    z = h * omega
    if not 0 < z < 2:
        return None, None
    # theta = 2 asin(z/2) avoids the cancellation in acos(1 - z^2/2)
    theta = 2.0 * math.asin(0.5 * z)
    return theta, 0.5 * (math.pi - theta)


def mode_block(omega: float, h: float) -> ModeBlock:
    theta, phi = _angles(omega, h)
    return ModeBlock(float(omega), float(h), theta, phi, mode_matrix(omega, h))


def interleave_permutation(n: int) -> np.ndarray:
    """Permutation ``P`` sending ``(y_1..y_n, v_1..v_n)`` to ``(y_1, v_1, y_2, v_2, ...)`` under ``P^T``."""
    P = np.zeros((2 * n, 2 * n))
    for i in range(n):
        P[i, 2 * i] = 1.0
        P[n + i, 2 * i + 1] = 1.0
    return P


def block_diagonalizer(tm: TransferMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(U, omegas)`` with ``U^T M U`` block diagonal."""
    lam, U1 = _symmetric_eig(tm.A)
    n = tm.n
    Z = np.zeros((n, n))
    U = np.block([[U1, Z], [Z, U1]]) @ interleave_permutation(n)
    return U, np.sqrt(lam)


def block_diagonalize(tm: TransferMatrix) -> list[ModeBlock]:
    _, omegas = block_diagonalizer(tm)
    return [mode_block(w, tm.h) for w in omegas]


def assemble_blocks(blocks) -> np.ndarray:
    n = len(blocks)
    out = np.zeros((2 * n, 2 * n))
    for i, b in enumerate(blocks):
        out[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = b.T
    return out


def block_eigenvalues(mb: ModeBlock) -> tuple[complex, complex]:
    z = mb.h_omega
    if not 0 < z < 2:
        raise ValueError("block eigenvalues are complex only for 0 < h*omega < 2")
    re = 1.0 - 0.5 * z * z
    im = z * math.sqrt(1.0 - 0.25 * z * z)
    return complex(re, im), complex(re, -im)


def phase_angles(omega: float, h: float) -> tuple[float, float]:
    """``(theta, phi)`` with ``cos theta = 1 - (h omega)^2 / 2``, ``cos phi = h omega / 2``."""
    if not 0 < h * omega < SQRT2:
        raise ValueError("phase angles need 0 < h*omega < sqrt(2)")
    return _angles(omega, h)


def block_power_closed_form(mb: ModeBlock, k: int) -> np.ndarray:
    if k < 0:
        raise ValueError("k must be non-negative")
    if mb.omega == 0.0:
        return np.array([[1.0, k * mb.h], [0.0, 1.0]])
    theta, phi = phase_angles(mb.omega, mb.h)
    w = mb.omega
    s = math.sin(phi)
    skt = math.sin(k * theta)
    return np.array(
        [
            [-math.sin(k * theta - phi) / s, skt / (w * s)],
            [-w * skt / s, math.sin(k * theta + phi) / s],
        ]
    )


def block_power_brute_force(mb: ModeBlock, k: int) -> np.ndarray:
    out = np.eye(2)
    for _ in range(k):
        out = out @ mb.T
    return out


@dataclass(frozen=True)
class PhaseApproximation:
    """Small-angle stand-in ``theta ~ h omega``, ``phi ~ pi/2`` for a soft mode."""

    omega: float
    h: float
    theta: float
    phi: float
    theta_exact: float
    error_bound: float

    def evolution(self, k: int, corrected: bool = False) -> np.ndarray:
        """Approximate k-step block.

        The default form keeps ``-cos(k h omega)`` in the lower-right entry,
        which is not the identity at ``k = 0``.  ``corrected=True`` flips
        that sign and is the form that tracks the exact power.
        """
        a = k * self.theta
        w = self.omega
        d = math.cos(a) if corrected else -math.cos(a)
        return np.array([[math.cos(a), math.sin(a) / w], [-w * math.sin(a), d]])


def approximate_phase(omega: float, h: float) -> PhaseApproximation:
    z = h * omega
    if not 0 < z < 0.1:
        raise ValueError("approximation is only offered for 0 < h*omega < 0.1")
    theta, _ = _angles(omega, h)
    # 2 asin(z/2) = z + z^3/24 + 3 z^5/640 + ...
    bound = z**3 / 24.0 + z**5 / 100.0
    return PhaseApproximation(omega, h, z, 0.5 * math.pi, theta, bound)


def decay_coefficient(xi: float, omega: float, h: float) -> float:
    """Per-step shrink factor ``exp(-tan(xi) h omega)`` of a mode nearing its zero."""
    if not 0 <= xi < 0.5 * math.pi:
        raise ValueError("xi must lie in [0, pi/2)")
    return math.exp(-math.tan(xi) * h * omega)


def mode_table(A, h: float) -> list[dict]:
    """Per-mode ``omega, theta, phi`` and first-reset estimate ``pi / (2 h omega)``.

    Drift modes (``omega == 0``) and modes outside ``0 < h omega < sqrt 2``
    get ``None`` angles; drift modes get an infinite estimate.
    """
    rows = []
    for b in block_diagonalize(build_transfer(A, h)):
        if b.is_drift:
            rows.append(dict(omega=0.0, theta=None, phi=None, first_reset_estimate=math.inf))
            continue
        ok = b.h_omega < SQRT2
        rows.append(
            dict(
                omega=b.omega,
                theta=b.theta if ok else None,
                phi=b.phi if ok else None,
                first_reset_estimate=0.5 * math.pi / b.h_omega,
            )
        )
    return rows


# --------------------------------------------------------------------------
# continuous-time reference solutions for f(x) = x^2 / 200


CONSERVATION_STOP_TIME = 5.0 * math.pi


def analytic_demo_1d(method: str, x0: float, t: float) -> tuple[float, float]:
    """Exact ``(x(t), f(x(t)))`` for ``f = x^2/200`` under three flows.

    ``gradient`` is the gradient flow, ``momentum`` the critically damped
    heavy ball (friction 1/5) and ``conservation`` the frictionless
    oscillator started at rest, whose speed first peaks at
    :data:`CONSERVATION_STOP_TIME`.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if method == "gradient":
        x = x0 * math.exp(-t / 100.0)
    elif method == "momentum":
        x = x0 * (1.0 + t / 10.0) * math.exp(-t / 10.0)
    elif method == "conservation":
        x = x0 * math.cos(t / 10.0)
    else:
        raise ValueError(f"unknown method {method!r}")
    return x, x * x / 200.0


def conservation_velocity(x0: float, t: float) -> float:
    """Time derivative of ``x0 cos(t/10)``."""
    return -0.1 * x0 * math.sin(t / 10.0)
