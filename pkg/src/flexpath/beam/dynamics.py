"""Newmark time marching of the rotating cantilever.

The semi-discrete system is ``M u'' + (K - s(t) M) u = F q(t)`` where
``s = theta'^2``: the centrifugal part of the load is moved to the left-hand
side as a time-varying softening of the stiffness, so it is treated
implicitly.  ``q`` holds the remaining (displacement-free) load terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from ..errors import InvalidArgumentError
from ..kinematics import beam_load
from ..trajectory import sample
from . import banded
from .model import BeamState, assemble
from .statics import solve_static_state, state_stress

REFACTOR_RTOL = 1e-12


class LoadSample(NamedTuple):
    """Displacement-independent nodal load [N/m] and squared spin rate [1/s^2]."""

    q: np.ndarray
    spin_sq: float = 0.0


LoadProvider = Callable[[float], LoadSample]


class Newmark:
    """Newmark integrator bound to one assembled system and step size.

    ``beta=1/4, gamma=1/2`` (average acceleration) conserves the discrete
    energy of the free linear problem; ``gamma > 1/2`` adds numerical damping.
    The effective matrix is refactored only when ``spin_sq`` moves by more than
    ``REFACTOR_RTOL`` relative.
    """

    def __init__(self, system, dt, beta=0.25, gamma=0.5):
        if not dt > 0:
            raise InvalidArgumentError(f"time step must be positive, got {dt}")
        if gamma < 0.5 or beta < 0.25 * (gamma + 0.5) ** 2 - 1e-15:
            raise InvalidArgumentError(
                "need gamma >= 1/2 and beta >= (gamma + 1/2)^2 / 4 for unconditional stability"
            )
        self.system = system
        self.dt = float(dt)
        self.beta = float(beta)
        self.gamma = float(gamma)
        self._spin = None
        self._factor = None
        self._mass_factor = None
        self.refactor_count = 0

    def _effective(self, spin_sq):
        if self._factor is not None:
            ref = max(abs(spin_sq), abs(self._spin))
            if abs(spin_sq - self._spin) <= REFACTOR_RTOL * ref:
                return self._factor
        s = self.system
        c0 = 1.0 / (self.beta * self.dt**2)
        self._factor = banded.Factor(s.K + (c0 - spin_sq) * s.M, s.bandwidth)
        self._spin = spin_sq
        self.refactor_count += 1
        return self._factor

    def _solve_mass(self, b):
        s = self.system
        if s.mass_is_diagonal:
            return b / np.diag(s.M)
        if self._mass_factor is None:
            self._mass_factor = banded.Factor(s.M, s.bandwidth)
        return self._mass_factor.solve(b)

    def equilibrium_acceleration(self, state, load):
        s = self.system
        rhs = s.F @ load.q - s.K @ state.u + load.spin_sq * (s.M @ state.u)
        return self._solve_mass(rhs)

    def step(self, state, load_next, load_now=None):
        """Advance ``state`` by one step using the load at ``state.t + dt``."""
        s, dt, b, g = self.system, self.dt, self.beta, self.gamma
        a0 = state.a
        if a0 is None:
            if load_now is None:
                raise InvalidArgumentError("state has no acceleration; pass the current load")
            a0 = self.equilibrium_acceleration(state, load_now)
        c0 = 1.0 / (b * dt**2)
        pred = c0 * state.u + state.v / (b * dt) + (0.5 / b - 1.0) * a0
        rhs = s.F @ load_next.q + s.M @ pred
        u1 = self._effective(load_next.spin_sq).solve(rhs)
        a1 = c0 * (u1 - state.u) - state.v / (b * dt) - (0.5 / b - 1.0) * a0
        v1 = state.v + dt * ((1.0 - g) * a0 + g * a1)
        return BeamState(state.t + dt, u1, v1, state.backend, a1)


def step_newmark(model, state, dt, load_provider, beta=0.25, gamma=0.5):
    """One Newmark step of ``model`` from ``state`` to ``state.t + dt``."""
    if not dt > 0:
        raise InvalidArgumentError(f"time step must be positive, got {dt}")
    integ = Newmark(assemble(model), dt, beta, gamma)
    load_now = load_provider(state.t) if state.a is None else None
    return integ.step(state, load_provider(state.t + dt), load_now)


def trajectory_load(model, traj, g=9.81):
    """Load provider for the rod carried along ``traj``.

    The nodal load excludes the centrifugal term, which is returned as
    ``spin_sq`` instead.
    """
    x = model.x
    zero_w = np.zeros_like(x)

    def provider(t):
        th, r = sample(traj, t)
        return LoadSample(beam_load(x, zero_w, th, r, model.rho, g).q, th.d1**2)

    return provider


@dataclass
class SimulationResult:
    """Recorded displacement and stress fields.

    ``w`` and ``sigma`` have shape ``(len(times), n_nodes)``.
    """

    times: np.ndarray
    x: np.ndarray
    w: np.ndarray
    sigma: np.ndarray
    kinetic: np.ndarray
    strain: np.ndarray
    slope: np.ndarray | None = None

    @property
    def energy(self):
        return self.kinetic + self.strain

    @property
    def tip(self):
        return self.w[:, -1]

    def energy_drift(self):
        """``(E_end - E_start) / max|E|``; zero when the energy never leaves zero."""
        e = self.energy
        scale = float(np.max(np.abs(e)))
        return 0.0 if scale == 0.0 else float((e[-1] - e[0]) / scale)

    def peak_stress(self):
        """``(|sigma|max, x, t)`` over the whole record."""
        k = int(np.argmax(np.abs(self.sigma)))
        i, j = np.unravel_index(k, self.sigma.shape)
        return float(abs(self.sigma[i, j])), float(self.x[j]), float(self.times[i])

    def peak_tip(self):
        i = int(np.argmax(np.abs(self.tip)))
        return float(self.tip[i]), float(self.times[i])


def _steps(T, dt):
    if not dt > 0:
        raise InvalidArgumentError(f"time step must be positive, got {dt}")
    n = max(1, int(math.ceil(T / dt - 1e-9)))
    return n, T / n


def integrate(model, load_provider, T, dt, state=None, output_stride=1, beta=0.25, gamma=0.5):
    """March ``model`` over ``[state.t, state.t + T]`` with the given load provider.

    ``dt`` is shrunk so that a whole number of steps lands exactly on ``T``.
    Output is recorded every ``output_stride`` steps and always at the end.
    """
    if output_stride < 1:
        raise InvalidArgumentError("output_stride must be >= 1")
    system = assemble(model)
    nsteps, dt = _steps(T, dt)
    integ = Newmark(system, dt, beta, gamma)
    state = BeamState.zeros(model) if state is None else state
    t0 = state.t
    if state.a is None:
        state = BeamState(state.t, state.u, state.v, state.backend,
                          integ.equilibrium_acceleration(state, load_provider(t0)))

    recs = []

    def record(st):
        recs.append((st.t, st.w, state_stress(model, st), system.kinetic_energy(st.v),
                     system.strain_energy(st.u), st.slope))

    record(state)
    for k in range(1, nsteps + 1):
        t = t0 + k * dt if k < nsteps else t0 + T
        state = integ.step(state, load_provider(t))
        state.t = t
        if k % output_stride == 0 or k == nsteps:
            record(state)
    times, w, sig, kin, strain, slope = zip(*recs)
    return SimulationResult(
        times=np.array(times),
        x=model.x,
        w=np.array(w),
        sigma=np.array(sig),
        kinetic=np.array(kin),
        strain=np.array(strain),
        slope=None if slope[0] is None else np.array(slope),
    ), state


INITIAL_STATES = ("rest", "static")


def simulate(model, traj, dt, g=9.81, output_stride=1, beta=0.25, gamma=0.5, initial="rest"):
    """Direct problem: deflection and stress histories of the rod moved along ``traj``.

    By default the rod starts undeformed and at rest.  ``initial="static"``
    starts instead from the static equilibrium under the load at ``t = 0``
    (a piece that has been hanging at the start pose for a long time).
    """
    if initial not in INITIAL_STATES:
        raise InvalidArgumentError(f"initial must be one of {INITIAL_STATES}, got {initial!r}")
    provider = trajectory_load(model, traj, g)
    state = None
    if initial == "static":
        load = provider(0.0)
        state = solve_static_state(model, load.q, load.spin_sq)
    result, _ = integrate(model, provider, traj.total_time, dt, state=state,
                          output_stride=output_stride, beta=beta, gamma=gamma)
    return result


def quasi_static_history(model, traj, times, g=9.81):
    """Instantaneous static response (inertia dropped) at each of ``times``.

    Returns ``(w, sigma)`` arrays shaped like a :class:`SimulationResult`'s.
    """
    provider = trajectory_load(model, traj, g)
    ws, sig = [], []
    for t in times:
        load = provider(float(t))
        st = solve_static_state(model, load.q, load.spin_sq)
        ws.append(st.w)
        sig.append(state_stress(model, st))
    return np.array(ws), np.array(sig)
