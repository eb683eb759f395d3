"""Acceptance suite: one test per numbered criterion.

Each test prints a single ``criterion N: PASS|FAIL ...`` line straight to the
terminal (bypassing capture) and then asserts.  Run it on its own with::

    pytest tests/test_acceptance.py -v
"""
import math
import time

import numpy as np
import pytest

from conftest import interior_points
from conslaw import objective as obj
from conslaw.baseline import (
    BaselineConfig,
    gradient_descent,
    heavy_ball,
    nesterov_alpha_sequence,
)
from conslaw.conserve import RunConfig, ade_minimize, combined_search, ec_detect
from conslaw.integrate import PhaseState, energy, stormer_verlet_step, symplectic_euler_step
from conslaw.spectral import (
    block_power_brute_force,
    block_power_closed_form,
    build_transfer,
    mode_block,
    phase_angles,
)
from conslaw.trace import DivergenceError


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


# speed-peak positions near (4,4,4,4) from the reference detection runs
SHEKEL_SEEDS = {
    5: [(3.9957, 4.0052, 3.9957, 4.0052)],
    7: [(4.0593, 3.9976, 4.0593, 3.9976)],
    10: [(4.0225, 3.8676, 4.0225, 3.8676), (4.0812, 3.9794, 4.0812, 3.9794)],
}
SHEKEL_VALUES = {5: -10.1532, 7: -10.4029, 10: -10.5364}


def test_criterion_1_shekel_final_values(report):
    notes, ok = [], True
    for m, seeds in SHEKEL_SEEDS.items():
        f = obj.shekel(m)
        for seed in seeds:
            t0 = time.perf_counter()
            tr = ade_minimize(f, seed, RunConfig(h=0.01))
            dt = time.perf_counter() - t0
            dx = np.max(np.abs(tr.final_state.x - 4.0))
            good = abs(tr.final_f - SHEKEL_VALUES[m]) <= 1e-3 and dx <= 1e-2 and dt < 1.0
            ok &= good
            notes.append(f"m={m} f={tr.final_f:.5f} |x-4|={dx:.1e} t={dt:.3f}s")
    report(1, ok, "; ".join(notes))


def test_criterion_2_styblinski_tang_table(report):
    t0 = time.perf_counter()
    f = obj.styblinski_tang(10)
    basins = {
        -250.2945: np.full(10, 2.5),
        -391.6617: np.full(10, -2.5),
        -320.9781: np.tile([2.5, -2.5], 5),
    }
    found = {}
    for target, start in basins.items():
        found[target] = ade_minimize(f, start, RunConfig(h=0.01)).final_f
    local_ok = all(abs(found[t] - t) <= 0.05 for t in basins)
    starts = [np.full(10, 5.0), np.tile([5.0, -5.0], 5)]
    res = combined_search(f, starts, RunConfig(h=0.01, v0=np.zeros(10)), 1000, RunConfig(h=0.01))
    dt = time.perf_counter() - t0
    pos_err = float(np.max(np.abs(res.x + 2.903534)))
    ok = local_ok and res.f <= -391.6 and pos_err <= 1e-2 and dt < 10
    detail = ", ".join(f"{v:.4f}" for v in found.values())
    report(2, ok, f"local [{detail}] global={res.f:.4f} pos_err={pos_err:.1e} t={dt:.2f}s")


def test_criterion_3_closed_form_power(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        h = rng.uniform(0.01, 1.0)
        z = rng.uniform(0.05, math.sqrt(2) * 0.99)
        mb = mode_block(z / h, h)
        k = int(rng.integers(0, 1001))
        worst = max(worst, float(np.max(np.abs(block_power_closed_form(mb, k) - block_power_brute_force(mb, k)))))
    dt = time.perf_counter() - t0
    report(3, worst < 1e-9 and dt < 1.0, f"max error {worst:.2e} t={dt:.3f}s")


def test_criterion_4_phase_identities(report):
    rng = np.random.default_rng(7)
    z = rng.uniform(0, math.sqrt(2), 1000)
    z = z[z > 0]
    worst = [0.0, 0.0, 0.0]
    for hw in z:
        theta, phi = phase_angles(hw, 1.0)
        worst[0] = max(worst[0], abs(2 * phi + theta - math.pi))
        worst[1] = max(worst[1], abs(math.sin(theta) - hw * math.sin(phi)))
        worst[2] = max(worst[2], abs(math.sin(3 * phi) + (1 - hw * hw) * math.sin(phi)))
    report(4, max(worst) < 1e-12, "residuals " + ", ".join(f"{w:.1e}" for w in worst))


def test_criterion_5_symplecticity_and_energy(report):
    rng = np.random.default_rng(5)
    det_err = 0.0
    for i in range(20):
        n = int(rng.integers(1, 21))
        A = obj.random_spd_quadratic(max(n, 2), seed=i, smallest=1e-3).A[:n, :n]
        det_err = max(det_err, abs(np.linalg.det(build_transfer(A, float(rng.uniform(0.01, 1.0))).M) - 1))

    f = obj.quadratic(obj.diagonal_quadratic([1.0]))
    h = 0.1
    drift = {}
    for name, step in (("euler", symplectic_euler_step), ("verlet", stormer_verlet_step)):
        s = PhaseState([1.0], [0.0])
        H0 = energy(f, s).total
        worst = 0.0
        for _ in range(100_000):
            s = step(f, s, h)
            worst = max(worst, abs(energy(f, s).total - H0))
        drift[name] = worst / H0
    ok = det_err < 1e-10 and drift["euler"] <= 2 * h and drift["verlet"] <= 2 * h * h
    report(5, ok, f"det err {det_err:.1e}; rel drift euler {drift['euler']:.2e} verlet {drift['verlet']:.2e}")


def test_criterion_6_first_reset_timing(report):
    notes, ok = [], True
    for omega in (1.0, 0.1, 0.01):
        h = 0.1 / omega
        f = obj.quadratic(obj.diagonal_quadratic([omega**2]))
        tr = ade_minimize(f, [1.0 / omega**2], RunConfig(h=h, maxiter=10_000))
        k = int(tr.reset_indices[0])
        gap = abs(k * h * omega - math.pi / 2)
        ok &= gap <= 2 * h * omega
        notes.append(f"omega={omega} k={k} |khw-pi/2|={gap:.3f}")
    report(6, ok, "; ".join(notes))


def test_criterion_7_convergence_ordering(report):
    n, maxiter = 1000, 1_000_000
    f = obj.quadratic(obj.nesterov_worst_case(n))
    x0 = np.full(n, 1000.0)
    t0 = time.perf_counter()
    ade = ade_minimize(f, x0, RunConfig(h=0.5, eps=1e-6, maxiter=maxiter))
    dt = time.perf_counter() - t0
    try:
        gd = gradient_descent(f, x0, BaselineConfig(h=1.0, eps=1e-6, maxiter=maxiter))
    except DivergenceError as exc:
        gd = exc.trace
    ok = (
        ade.converged
        and gd.termination == "maxiter"
        and ade.iterations < gd.iterations
        and dt < 60
    )
    report(
        7,
        ok,
        f"ade {ade.termination} after {ade.iterations} (t={dt:.1f}s); "
        f"gd {gd.termination} after {gd.iterations}",
    )


def test_criterion_8_detection(report):
    f = obj.piecewise_cosine_1d()
    found = ec_detect(f, [0.0], RunConfig(h=0.1, v0=[0.2]), 180)
    e0 = energy(f, PhaseState([0.0], [0.2])).total
    barrier = max(f.value([2 * np.pi]), f.value([4 * np.pi]))
    xs = sorted(c.position[0] for c in found.deduplicated(1e-4))
    near = len(xs) == 3 and all(abs(x - t) <= 0.3 for x, t in zip(xs, (np.pi, 3 * np.pi, 5 * np.pi)))
    lin = ec_detect(obj.linear([1.0]), [0.0], RunConfig(h=0.1, v0=[1.0]), 180)
    ok = e0 > barrier and near and len(lin) == 0
    report(8, ok, f"candidates/pi {[round(float(x) / np.pi, 3) for x in xs]}; linear {len(lin)}")


def test_criterion_9_gradient_oracle(report, shipped_objectives):
    worst = {}
    for name, f in shipped_objectives.items():
        worst[name] = max(obj.gradient_relative_error(f, x) for x in interior_points(name, 100))
    ok = all(w < 1e-6 for w in worst.values())
    report(9, ok, "; ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_criterion_10_baseline_sanity(report):
    f = obj.styblinski_tang(4)
    x0 = [1.0, -2.0, 0.5, 3.0]
    a = gradient_descent(f, x0, BaselineConfig(h=0.01, maxiter=2000))
    b = heavy_ball(f, x0, BaselineConfig(h=0.01, maxiter=2000, gamma=0.0))
    identical = all(np.array_equal(getattr(a, c), getattr(b, c)) for c in ("k", "f", "grad_norm", "v_norm", "reset"))
    identical &= np.array_equal(a.final_state.x, b.final_state.x)
    residual = 0.0
    for kappa in (0.0, 1e-6, 1e-3, 0.5):
        al = nesterov_alpha_sequence(kappa, 10_000)
        r = np.abs(al[1:] ** 2 - (1 - al[1:]) * al[:-1] ** 2 - kappa * al[1:])
        residual = max(residual, float(r.max()))
    report(10, identical and residual < 1e-12, f"trace identical={identical}; alpha residual {residual:.1e}")


@pytest.mark.slow
def test_supplementary_ordering_off_resonance(capsys):
    """Criterion 7's ordering at a step where 3 h omega_max stays clear of pi.

    ADE at h = 0.4 against gradient descent at h = 0.25, the largest step
    that does not overshoot the stiffest mode, on the same problem.
    """
    n, maxiter = 1000, 1_000_000
    f = obj.quadratic(obj.nesterov_worst_case(n))
    x0 = np.full(n, 1000.0)
    ade = ade_minimize(f, x0, RunConfig(h=0.4, eps=1e-6, maxiter=maxiter))
    gd = gradient_descent(f, x0, BaselineConfig(h=0.25, eps=1e-6, maxiter=maxiter))
    ok = ade.converged and ade.iterations < gd.iterations
    with capsys.disabled():
        print(
            f"\nsupplementary: {'PASS' if ok else 'FAIL'} ade(h=0.4) {ade.termination} after "
            f"{ade.iterations}; gd(h=0.25) {gd.termination} after {gd.iterations}"
        )
    assert ok
