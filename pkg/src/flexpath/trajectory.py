"""Rest-to-rest trajectories for the arm extension r(t) and rotation theta(t).

Every path is a polynomial (or a chain of polynomials) in time, so values and
derivatives up to the jerk are evaluated exactly with Horner's scheme.

    >>> traj = rest_to_rest("quintic", theta0=0.0, theta1=1.0, R=0.2, T=1.0)
    >>> th, r = sample(traj, 0.5)
    >>> round(th.value, 12), round(th.d2, 12)
    (0.5, 0.0)
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import InvalidArgumentError, OutOfRangeError

MAX_DEGREE = 7
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class KinematicSample(NamedTuple):
    """Value of a path and its first three time derivatives at one instant."""

    value: float
    d1: float
    d2: float
    d3: float


class Peak(NamedTuple):
    value: float
    time: float


class JerkPeaks(NamedTuple):
    theta: Peak
    r: Peak


def _derivative_coefficients(coeffs, order):
    c = list(coeffs)
    for _ in range(order):
        c = [k * c[k] for k in range(1, len(c))] or [0.0]
    return c


def _horner(coeffs, t):
    acc = 0.0 * t
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


@dataclass(frozen=True)
class PolynomialSegment:
    """Polynomial ``sum(c_k t**k)`` on the local interval ``[0, duration]``.

    Coefficients are stored in ascending degree.
    """

    coefficients: tuple
    duration: float

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise InvalidArgumentError("a polynomial segment needs at least one coefficient")
        if len(coeffs) - 1 > MAX_DEGREE:
            raise InvalidArgumentError(f"segment degree {len(coeffs) - 1} exceeds {MAX_DEGREE}")
        if not all(math.isfinite(c) for c in coeffs):
            raise InvalidArgumentError("segment coefficients must be finite")
        if not (self.duration > 0 and math.isfinite(self.duration)):
            raise InvalidArgumentError(f"segment duration must be positive, got {self.duration}")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "duration", float(self.duration))
        object.__setattr__(
            self, "_derivs", tuple(tuple(_derivative_coefficients(coeffs, k)) for k in range(4))
        )

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def evaluate(self, t, order=0):
        """Evaluate the ``order``-th derivative (0..3) at local time ``t``.

        ``t`` may be a scalar or an array; no range check is done here.
        """
        if order < 4:
            coeffs = self._derivs[order]
        else:
            coeffs = _derivative_coefficients(self.coefficients, order)
        return _horner(coeffs, t if np.ndim(t) == 0 else np.asarray(t, dtype=float))

    def sample(self, t):
        return KinematicSample(*(float(self.evaluate(t, k)) for k in range(4)))


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Chain of segments played back to back; each uses its own local clock."""

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise InvalidArgumentError("a piecewise path needs at least one segment")
        for s in segs:
            if not isinstance(s, PolynomialSegment):
                raise InvalidArgumentError("piecewise paths are built from PolynomialSegment items")
        object.__setattr__(self, "segments", segs)
        starts = np.concatenate([[0.0], np.cumsum([s.duration for s in segs])])
        object.__setattr__(self, "_starts", tuple(float(v) for v in starts))

    @property
    def duration(self):
        return self._starts[-1]

    @property
    def breakpoints(self):
        return self._starts

    def _locate(self, t):
        k = bisect.bisect_right(self._starts, t) - 1
        return min(max(k, 0), len(self.segments) - 1)

    def evaluate(self, t, order=0):
        if np.ndim(t) == 0:
            k = self._locate(float(t))
            return self.segments[k].evaluate(float(t) - self._starts[k], order)
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        for i, ti in np.ndenumerate(t):
            out[i] = self.evaluate(float(ti), order)
        return out

    def sample(self, t):
        return KinematicSample(*(float(self.evaluate(t, k)) for k in range(4)))


Path = Union[PolynomialSegment, PiecewisePolynomial]


def _check_rest_endpoints(path, name):
    T = path.duration
    q0, q1 = float(path.evaluate(0.0)), float(path.evaluate(T))
    scale = max(1.0, abs(q0), abs(q1), abs(q1 - q0) / T)
    for t in (0.0, T):
        v = float(path.evaluate(t, 1))
        if abs(v) > 1e-12 * scale:
            raise InvalidArgumentError(f"{name} must start and end at rest; velocity {v:g} at t={t:g}")


@dataclass(frozen=True)
class Trajectory:
    """Joint paths for the rotation ``theta`` [rad] and extension ``r`` [m]."""

    theta: Path
    r: Path
    total_time: float

    def __post_init__(self):
        T = float(self.total_time)
        for name, path in (("theta", self.theta), ("r", self.r)):
            if abs(path.duration - T) > 1e-12 * T:
                raise InvalidArgumentError(
                    f"{name} lasts {path.duration:g} s but the trajectory lasts {T:g} s"
                )
            _check_rest_endpoints(path, name)
        if abs(float(self.r.evaluate(0.0))) > 1e-12 * max(1.0, abs(float(self.r.evaluate(T)))):
            raise InvalidArgumentError("the extension r must start at 0")
        object.__setattr__(self, "total_time", T)

    @property
    def theta0(self):
        return float(self.theta.evaluate(0.0))

    @property
    def theta1(self):
        return float(self.theta.evaluate(self.total_time))

    @property
    def R(self):
        return float(self.r.evaluate(self.total_time))


def _check_duration(T):
    if not (T > 0 and math.isfinite(T)):
        raise InvalidArgumentError(f"duration must be positive and finite, got {T}")


def cubic_rest_to_rest(q0, q1, T):
    """Cubic ``q0 + (q1-q0)(3 tau^2 - 2 tau^3)``, ``tau = t/T``.

    Meets exactly the four conditions q(0)=q0, q'(0)=0, q(T)=q1, q'(T)=0.
    """
    _check_duration(T)
    d = q1 - q0
    return PolynomialSegment((q0, 0.0, 3.0 * d / T**2, -2.0 * d / T**3), T)


def quintic_rest_to_rest(q0, q1, T):
    """Quintic ``q0 + (q1-q0)(10 tau^3 - 15 tau^4 + 6 tau^5)``.

    Velocity and acceleration both vanish at the two ends, so the jerk is
    bounded by ``60 |q1-q0| / T**3``.
    """
    _check_duration(T)
    d = q1 - q0
    return PolynomialSegment(
        (q0, 0.0, 0.0, 10.0 * d / T**3, -15.0 * d / T**4, 6.0 * d / T**5), T
    )


GENERATORS = {"cubic": cubic_rest_to_rest, "quintic": quintic_rest_to_rest}


def rest_to_rest(generator, theta0, theta1, R, T):
    """Single-segment trajectory from ``(theta0, r=0)`` to ``(theta1, R)`` in time ``T``."""
    try:
        make = GENERATORS[generator]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown generator {generator!r}; expected one of {sorted(GENERATORS)}"
        ) from None
    return Trajectory(make(theta0, theta1, T), make(0.0, R, T), T)


def constant(theta0, T):
    """Hold ``theta0`` with the arm retracted for ``T`` seconds."""
    _check_duration(T)
    return Trajectory(PolynomialSegment((theta0,), T), PolynomialSegment((0.0,), T), T)


def spin_hold(rate, ramp_time, hold_time, theta0=0.0):
    """Spin up to a constant angular rate, hold it, then spin back down to rest.

    The ramps blend the rate with the quintic smoothstep, so the angular
    acceleration is continuous and zero at every joint.  The arm extension
    stays at zero.
    """
    _check_duration(ramp_time)
    _check_duration(hold_time)
    Tr, W = ramp_time, rate
    # theta(tau) = W*Tr*(2.5 tau^4 - 3 tau^5 + tau^6) integrates the smoothstep rate
    up = PolynomialSegment(
        (theta0, 0.0, 0.0, 0.0, 2.5 * W / Tr**3, -3.0 * W / Tr**4, 1.0 * W / Tr**5), Tr
    )
    theta_a = theta0 + 0.5 * W * Tr
    hold = PolynomialSegment((theta_a, W), hold_time)
    theta_b = theta_a + W * hold_time
    # rate W*(1 - smoothstep): theta = theta_b + W*Tr*(tau - 2.5 tau^4 + 3 tau^5 - tau^6)
    down = PolynomialSegment(
        (theta_b, W, 0.0, 0.0, -2.5 * W / Tr**3, 3.0 * W / Tr**4, -1.0 * W / Tr**5), Tr
    )
    T = 2.0 * Tr + hold_time
    theta = PiecewisePolynomial((up, hold, down))
    return Trajectory(theta, PolynomialSegment((0.0,), T), T)


def sample(traj, t):
    """Value, velocity, acceleration and jerk of ``theta`` and ``r`` at time ``t``."""
    T = traj.total_time
    slack = 1e-12 * T
    if not (-slack <= t <= T + slack):
        raise OutOfRangeError(f"t={t!r} lies outside [0, {T!r}]")
    t = min(max(float(t), 0.0), T)
    return traj.theta.sample(t), traj.r.sample(t)


def _golden_max(f, a, b, iters=60):
    """Maximize a unimodal ``f`` on ``[a, b]`` by golden-section search."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a <= 1e-14 * max(1.0, abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _path_peak_jerk(path, T, n_samples):
    ts = np.linspace(0.0, T, n_samples)
    jerk = np.abs(np.asarray(path.evaluate(ts, 3), dtype=float))
    i = int(np.argmax(jerk))
    best_t, best = float(ts[i]), float(jerk[i])
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, n_samples - 1)]
    if hi > lo:
        t_ref, v_ref = _golden_max(lambda t: abs(float(path.evaluate(t, 3))), lo, hi)
        if v_ref > best:
            best_t, best = float(t_ref), v_ref
    return Peak(best, best_t)


def max_jerk(traj, n_samples=201):
    """Peak ``|d3|`` of ``theta`` and ``r`` with the time it is attained.

    A uniform grid locates the largest sample; golden-section search then
    refines within the neighbouring grid cells.
    """
    if n_samples < 2:
        raise InvalidArgumentError("max_jerk needs at least two samples")
    T = traj.total_time
    return JerkPeaks(_path_peak_jerk(traj.theta, T, n_samples), _path_peak_jerk(traj.r, T, n_samples))
