"""Numerical experiments shared by the unit and acceptance tests."""
import math

import numpy as np

from flexpath.beam import BeamModel, BeamState, LoadSample, integrate, quasi_static_history, simulate
from flexpath.beam.modal import discrete_modes
from flexpath.trajectory import rest_to_rest, spin_hold

BETA1 = 1.8751040687119611


def unit_model(n=41, backend="fem"):
    return BeamModel(E=1.0, I=1.0, rho=1.0, L=1.0, h=0.01, sigma_yield=1.0, n_nodes=n,
                     backend=backend)


def steel_strip(n=41, backend="fem"):
    return BeamModel(E=2.0e11, I=4.1667e-12, rho=0.3925, L=0.5, h=5.0e-4, sigma_yield=2.5e8,
                     n_nodes=n, backend=backend)


def free_vibration_drift(backend="fem", n=41, periods=10, steps_per_period=200):
    """Relative energy drift of the discrete first mode left to vibrate freely."""
    m = unit_model(n, backend)
    omegas, vecs = discrete_modes(m, 1)
    period = 2 * math.pi / omegas[0]
    u0 = vecs[:, 0] / np.abs(vecs[:, 0]).max() * 1e-3
    state = BeamState(0.0, u0, np.zeros_like(u0), m.backend)
    zero = LoadSample(np.zeros(m.n_nodes), 0.0)
    res, _ = integrate(m, lambda t: zero, periods * period, period / steps_per_period, state=state)
    e = res.energy
    return float(np.max(np.abs(e - e[0])) / e[0]), res


def gravity_onset_tip(dt, n=21):
    """Tip deflection after a smooth swing from vertical to horizontal over two periods."""
    m = unit_model(n, "fem")
    period = 2 * math.pi / BETA1**2
    traj = rest_to_rest("quintic", math.pi / 2, 0.0, 0.0, 2 * period)
    return simulate(m, traj, dt, g=9.81).tip[-1], period


def temporal_orders(n=21, levels=3, refine=16):
    _, period = gravity_onset_tip(1.0, n)
    d0 = period / 20
    ref, _ = gravity_onset_tip(d0 / refine, n)
    errs = [abs(gravity_onset_tip(d0 / 2**k, n)[0] - ref) for k in range(levels)]
    errs = np.array(errs)
    return np.log2(errs[:-1] / errs[1:]), errs


def spin_growth(frac, g=9.81, n=41, hold_periods=5):
    """Tip growth while holding theta' = frac * omega_1 after a one-period ramp.

    Growth is max|tip| over the hold divided by max|tip| at the end of the ramp.
    """
    m = unit_model(n, "fem")
    omega1 = BETA1**2
    period = 2 * math.pi / omega1
    traj = spin_hold(frac * omega1, period, hold_periods * period)
    sim = simulate(m, traj, period / 200, g=g)
    t = sim.times
    ramp = t <= period + 1e-12
    hold = (t > period) & (t <= period * (1 + hold_periods) + 1e-12)
    return float(np.abs(sim.tip[hold]).max() / np.abs(sim.tip[ramp]).max())


def quasi_static_gap(periods=20, steps_per_period=50, n=41):
    """Max-norm gap between dynamic and instantaneous-static deflection histories."""
    m = steel_strip(n)
    omega1 = BETA1**2 * m.natural_frequency_scale()
    period = 2 * math.pi / omega1
    traj = rest_to_rest("quintic", math.pi / 2, 0.0, 0.0, periods * period)
    sim = simulate(m, traj, period / steps_per_period)
    wq, _ = quasi_static_history(m, traj, sim.times)
    return float(np.abs(sim.w - wq).max() / np.abs(wq).max())


def clamped_square_coeff(n):
    """Center ``|w| D / (q a^4)`` of the uniformly loaded clamped unit square on an n x n grid."""
    from flexpath.plate import PlateModel, solve_plate_static

    m = PlateModel(E=1.0, nu=0.3, h=0.1, rho=1.0, a=1.0, b=1.0, nx=n, ny=n)
    sol = solve_plate_static(m, 1.0)
    return abs(sol.w0[n // 2, n // 2]) * m.D


def plate_cantilever(n, q=1.0):
    """Unit square clamped on the left, classical free edges elsewhere."""
    from flexpath.plate import PlateModel, solve_plate_static

    m = PlateModel(E=1.0, nu=0.3, h=0.1, rho=1.0, a=1.0, b=1.0, nx=n, ny=n,
                   clamped_edges={"left"}, free_edge="classical")
    return solve_plate_static(m, q)
