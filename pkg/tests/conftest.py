import numpy as np
import pytest

from conslaw import objective as obj


def _rng(seed=0):
    return np.random.default_rng(seed)


def interior_points(name, count=100, seed=0):
    """Seeded random points inside the natural domain of each landscape."""
    rng = _rng(seed)
    if name == "piecewise-cosine":
        pts = []
        while len(pts) < count:
            t = rng.uniform(0.01, 6 * np.pi - 0.01)
            # keep finite-difference stencils off the curvature jumps
            if min(abs(t - 2 * np.pi), abs(t - 4 * np.pi)) > 1e-3:
                pts.append([t])
        return np.array(pts)
    box = {
        "styblinski-tang": (-5, 5, 5),
        "shekel": (0, 10, 4),
        "sine-bowl": (0, 8, 2),
        "quadratic": (-3, 3, 6),
        "lse": (-1, 1, 50),
        "quadratic-nesterov": (-3, 3, 20),
        "linear": (-10, 10, 3),
    }[name]
    lo, hi, d = box
    return rng.uniform(lo, hi, size=(count, d))


@pytest.fixture(scope="session")
def shipped_objectives():
    spd = obj.random_spd_quadratic(6, seed=3)
    return {
        "styblinski-tang": obj.styblinski_tang(5),
        "shekel": obj.shekel(10),
        "sine-bowl": obj.sine_bowl_2d(),
        "piecewise-cosine": obj.piecewise_cosine_1d(),
        "quadratic": obj.quadratic(spd),
        "lse": obj.random_log_sum_exp(50, 200, 5.0, seed=7),
        "quadratic-nesterov": obj.quadratic(obj.nesterov_worst_case(20)),
        "linear": obj.linear([1.0, -2.0, 0.5], 1.0),
    }
