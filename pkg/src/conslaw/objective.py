"""Objective functions and the test landscapes used throughout the package.

An :class:`Objective` bundles a scalar field with its gradient and, where
cheap, its Hessian.  All shipped objectives are immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

Array = np.ndarray


class DomainError(ValueError):
    """Raised when an objective is evaluated outside its domain."""


@dataclass(frozen=True)
class Objective:
    dim: int
    value: Callable[[Array], float]
    gradient: Callable[[Array], Array]
    hessian: Optional[Callable[[Array], Array]] = None
    fused: Optional[Callable[[Array], tuple]] = field(default=None, repr=False)
    name: str = "objective"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")

    def value_and_gradient(self, x: Array) -> tuple[float, Array]:
        """Return ``(f(x), grad f(x))``, sharing work when the objective allows."""
        if self.fused is not None:
            return self.fused(x)
        return self.value(x), self.gradient(x)


def _as_point(x, dim: int) -> Array:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.shape != (dim,):
        raise ValueError(f"expected point of shape ({dim},), got {x.shape}")
    return x


# --------------------------------------------------------------------------
# quadratics


@dataclass(frozen=True)
class QuadraticSpec:
    """``f(x) = 1/2 x^T A x + b^T x`` with symmetric PSD ``A``.

    ``A`` may be a dense array or a scipy sparse matrix.  When ``spectrum`` is
    given (the eigenvalues ``A`` was built from) it is checked for
    non-negativity.
    """

    A: object
    b: Array
    spectrum: Optional[Array] = None

    def __post_init__(self):
        A = self.A
        b = np.asarray(self.b, dtype=float)
        object.__setattr__(self, "b", b)
        if sp.issparse(A):
            A = sp.csr_matrix(A, dtype=float)
            if A.shape[0] != A.shape[1]:
                raise ValueError("A must be square")
            if (A != A.T).nnz:
                raise ValueError("A must be symmetric")
        else:
            A = np.array(A, dtype=float)
            if A.ndim != 2 or A.shape[0] != A.shape[1]:
                raise ValueError("A must be square")
            if not np.array_equal(A, A.T):
                raise ValueError("A must be symmetric")
        object.__setattr__(self, "A", A)
        if b.shape != (A.shape[0],):
            raise ValueError(
                f"dimension mismatch: A is {A.shape}, b has shape {b.shape}"
            )
        if self.spectrum is not None:
            spectrum = np.asarray(self.spectrum, dtype=float)
            if spectrum.shape != b.shape:
                raise ValueError("spectrum length must equal dim")
            if np.any(spectrum < 0):
                raise ValueError("A must be positive semidefinite")
            object.__setattr__(self, "spectrum", spectrum)

    @property
    def dim(self) -> int:
        return self.b.shape[0]

    def dense(self) -> Array:
        return self.A.toarray() if sp.issparse(self.A) else self.A


def quadratic(spec: QuadraticSpec) -> Objective:
    A, b, n = spec.A, spec.b, spec.dim
    H = spec.dense()

    def fused(x):
        x = _as_point(x, n)
        Ax = A @ x
        return 0.5 * float(x @ Ax) + float(b @ x), Ax + b

    return Objective(
        dim=n,
        value=lambda x: fused(x)[0],
        gradient=lambda x: fused(x)[1],
        hessian=lambda x: H,
        fused=fused,
        name="quadratic",
    )


def diagonal_quadratic(diag, b=None) -> QuadraticSpec:
    diag = np.asarray(diag, dtype=float)
    b = np.zeros_like(diag) if b is None else b
    return QuadraticSpec(np.diag(diag), b, spectrum=diag)


def random_spd_quadratic(
    dim: int = 500, seed: int = 0, smallest: float = 1e-6, largest: float = 1.0
) -> QuadraticSpec:
    """Random SPD quadratic with spectrum log-uniform in ``[smallest, largest]``.

    Both ends of the spectrum are pinned exactly, so the condition number is
    ``largest / smallest``.  ``b`` is standard Gaussian.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.standard_normal((dim, dim)))
    Q = Q * np.sign(np.diag(R))
    eigs = np.exp(rng.uniform(np.log(smallest), np.log(largest), size=dim))
    eigs[0] = smallest
    eigs[1] = largest
    A = (Q * eigs) @ Q.T
    A = 0.5 * (A + A.T)
    b = rng.standard_normal(dim)
    return QuadraticSpec(A, b, spectrum=eigs)


def nesterov_worst_case(n: int) -> QuadraticSpec:
    """Tridiagonal ``(-1, 2, -1)`` matrix with ``b = 0``, stored sparse."""
    if n < 2:
        raise ValueError("n must be at least 2")
    ones = np.ones(n - 1)
    A = sp.diags([-ones, 2.0 * np.ones(n), -ones], [-1, 0, 1], format="csr")
    return QuadraticSpec(A, np.zeros(n), spectrum=nesterov_eigenvalues(n))


def nesterov_eigenvalues(n: int) -> Array:
    k = np.arange(1, n + 1)
    return 4.0 * np.sin(k * np.pi / (2 * (n + 1))) ** 2


# --------------------------------------------------------------------------
# log-sum-exp


def log_sum_exp(A, b, rho: float) -> Objective:
    """``rho * log sum_i exp((<a_i, x> - b_i) / rho)`` over the columns of ``A``.

    ``A`` is ``d x m`` (d = variable dimension), ``b`` has length ``m``.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    A = np.array(A, dtype=float, ndmin=2)
    b = np.asarray(b, dtype=float).reshape(-1)
    if A.shape[1] != b.shape[0]:
        raise ValueError(
            f"A has {A.shape[1]} columns but b has {b.shape[0]} entries"
        )
    d = A.shape[0]

    def _weights(x):
        x = _as_point(x, d)
        z = (A.T @ x - b) / rho
        zmax = z.max()
        e = np.exp(z - zmax)
        total = e.sum()
        return rho * (zmax + np.log(total)), e / total

    def fused(x):
        f, s = _weights(x)
        return float(f), A @ s

    def hessian(x):
        _, s = _weights(x)
        return (A * s) @ A.T / rho - np.outer(A @ s, A @ s) / rho

    return Objective(
        dim=d,
        value=lambda x: fused(x)[0],
        gradient=lambda x: fused(x)[1],
        hessian=hessian,
        fused=fused,
        name="log-sum-exp",
    )


def softmax_weights(A, b, rho: float, x) -> Array:
    A = np.array(A, dtype=float, ndmin=2)
    z = (A.T @ np.asarray(x, dtype=float) - np.asarray(b, dtype=float)) / rho
    e = np.exp(z - z.max())
    return e / e.sum()


def random_log_sum_exp(d: int = 50, m: int = 200, rho: float = 5.0, seed: int = 0):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((d, m))
    b = rng.standard_normal(m)
    return log_sum_exp(A, b, rho)


# --------------------------------------------------------------------------
# nonconvex landscapes


def styblinski_tang(d: int) -> Objective:
    if d < 1:
        raise ValueError("d must be at least 1")

    def value(x):
        x = _as_point(x, d)
        return 0.5 * float(np.sum(x**4 - 16.0 * x**2 + 5.0 * x))

    def gradient(x):
        x = _as_point(x, d)
        return 2.0 * x**3 - 16.0 * x + 2.5

    def hessian(x):
        x = _as_point(x, d)
        return np.diag(6.0 * x**2 - 16.0)

    def fused(x):
        x = _as_point(x, d)
        x2 = x * x
        return 0.5 * float(np.sum(x2 * x2 - 16.0 * x2 + 5.0 * x)), 2.0 * x2 * x - 16.0 * x + 2.5

    return Objective(d, value, gradient, hessian, fused, name="styblinski-tang")


SHEKEL_BETA = 0.1 * np.array([1, 2, 2, 4, 4, 6, 3, 7, 5, 5], dtype=float)
SHEKEL_C = np.array(
    [
        [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0],
        [4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6],
        [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0],
        [4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6],
    ]
)


@dataclass(frozen=True)
class ShekelSpec:
    m: int = 10
    beta: Array = field(default_factory=lambda: SHEKEL_BETA.copy())
    C: Array = field(default_factory=lambda: SHEKEL_C.copy())

    def __post_init__(self):
        if self.m not in (5, 7, 10):
            raise ValueError("m must be one of 5, 7, 10")
        if not np.array_equal(self.beta, SHEKEL_BETA):
            raise ValueError("beta differs from the standard Shekel weights")
        if not np.array_equal(self.C, SHEKEL_C):
            raise ValueError("C differs from the standard Shekel centres")


def shekel(spec: ShekelSpec | int = 10) -> Objective:
    if isinstance(spec, int):
        spec = ShekelSpec(spec)
    centres = spec.C[:, : spec.m].T  # (m, 4)
    beta = spec.beta[: spec.m]

    def _parts(x):
        x = _as_point(x, 4)
        diff = x - centres
        denom = np.einsum("ij,ij->i", diff, diff) + beta
        return diff, denom

    def fused(x):
        diff, denom = _parts(x)
        return -float(np.sum(1.0 / denom)), 2.0 * (diff / denom[:, None] ** 2).sum(axis=0)

    def hessian(x):
        diff, denom = _parts(x)
        H = 2.0 * np.eye(4) * np.sum(1.0 / denom**2)
        H -= 8.0 * np.einsum("i,ij,ik->jk", 1.0 / denom**3, diff, diff)
        return H

    return Objective(
        dim=4,
        value=lambda x: fused(x)[0],
        gradient=lambda x: fused(x)[1],
        hessian=hessian,
        fused=fused,
        name=f"shekel-{spec.m}",
    )


_TWO_PI = 2.0 * np.pi
# (amplitude, offset) on [0, 2pi], [2pi, 4pi], [4pi, 6pi]
_PIECES = ((2.0, 0.0), (1.0, 1.0), (3.0, -1.0))


def _piece(x: float) -> tuple[float, float]:
    if not 0.0 <= x <= 3 * _TWO_PI:
        raise DomainError(f"x = {x} lies outside [0, 6*pi]")
    return _PIECES[min(int(x // _TWO_PI), 2)]


def piecewise_cosine_1d() -> Objective:
    """Three cosine wells on ``[0, 6 pi]`` with minima -2, 0, -4 at pi, 3pi, 5pi.

    Value and slope are continuous at the junctions ``2 pi`` and ``4 pi``;
    the curvature jumps there.  Points outside ``[0, 6 pi]`` raise
    :class:`DomainError`.
    """

    def value(x):
        t = float(_as_point(x, 1)[0])
        a, c = _piece(t)
        return a * np.cos(t) + c

    def gradient(x):
        t = float(_as_point(x, 1)[0])
        a, _ = _piece(t)
        return np.array([-a * np.sin(t)])

    def hessian(x):
        t = float(_as_point(x, 1)[0])
        a, _ = _piece(t)
        return np.array([[-a * np.cos(t)]])

    def fused(x):
        t = float(_as_point(x, 1)[0])
        a, c = _piece(t)
        return a * np.cos(t) + c, np.array([-a * np.sin(t)])

    return Objective(1, value, gradient, hessian, fused, name="piecewise-cosine")


SINE_BOWL_DOMAIN = ((0.0, 8.0), (0.0, 8.0))


def sine_bowl_2d() -> Objective:
    """``1/2 [(x1-4)^2 + (x2-4)^2 + 8 sin(x1 + 2 x2)]``, nominally on [0, 8]^2.

    Evaluation outside the box is allowed; use :func:`in_sine_bowl_domain`
    to flag it.
    """

    def value(x):
        x = _as_point(x, 2)
        return 0.5 * ((x[0] - 4) ** 2 + (x[1] - 4) ** 2 + 8 * np.sin(x[0] + 2 * x[1]))

    def gradient(x):
        x = _as_point(x, 2)
        c = np.cos(x[0] + 2 * x[1])
        return np.array([x[0] - 4 + 4 * c, x[1] - 4 + 8 * c])

    def hessian(x):
        x = _as_point(x, 2)
        s = np.sin(x[0] + 2 * x[1])
        return np.array([[1 - 4 * s, -8 * s], [-8 * s, 1 - 16 * s]])

    return Objective(2, value, gradient, hessian, name="sine-bowl")


def in_sine_bowl_domain(x) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(all(lo <= xi <= hi for xi, (lo, hi) in zip(x, SINE_BOWL_DOMAIN)))


def linear(slope, offset: float = 0.0) -> Objective:
    """Affine ``f(x) = slope . x + offset``; has no stationary point."""
    slope = np.asarray(slope, dtype=float).reshape(-1)
    d = slope.shape[0]
    zero = np.zeros((d, d))
    return Objective(
        dim=d,
        value=lambda x: float(slope @ _as_point(x, d)) + offset,
        gradient=lambda x: slope.copy(),
        hessian=lambda x: zero,
        name="linear",
    )


# --------------------------------------------------------------------------
# finite differences


def finite_difference_gradient(f: Objective, x, step: float = 1e-5) -> Array:
    """Central differences with per-component step ``step * (1 + |x_i|)``."""
    if step <= 0:
        raise ValueError("step must be positive")
    x = _as_point(x, f.dim)
    g = np.empty_like(x)
    for i in range(x.size):
        hi = step * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += hi
        xm[i] -= hi
        g[i] = (f.value(xp) - f.value(xm)) / (xp[i] - xm[i])
    return g


def gradient_relative_error(f: Objective, x, step: float = 1e-5) -> float:
    """Max-norm gap between analytic and finite-difference gradients.

    Normalised by ``max(1, |grad f|_inf)`` so stationary points do not blow up
    the ratio.
    """
    g = np.asarray(f.gradient(x), dtype=float)
    fd = finite_difference_gradient(f, x, step)
    return float(np.max(np.abs(g - fd)) / max(1.0, np.max(np.abs(g))))
