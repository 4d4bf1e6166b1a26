"""Yield, jerk and resonance checks, and the minimum-duration search.

A trajectory is *safe* when the peak stress stays below ``sigma_max``, both
joint jerks stay below their limits and the rotation rate never comes within
``resonance_gap_min`` (relative) of a natural rate.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .beam import modal_analysis, resonance_proximity, simulate
from .errors import InfeasibleError, InvalidArgumentError
from .trajectory import max_jerk, rest_to_rest

N_SCAN = 12
REFINE_RTOL = 1e-2


@dataclass(frozen=True)
class SafetyLimits:
    sigma_max: float
    jerk_max_theta: float
    jerk_max_r: float
    resonance_gap_min: float = 0.1

    def __post_init__(self):
        for name in ("sigma_max", "jerk_max_theta", "jerk_max_r", "resonance_gap_min"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and not math.isnan(v)):
                raise InvalidArgumentError(f"{name} must be strictly positive, got {v!r}")
            object.__setattr__(self, name, float(v))

    def as_dict(self):
        return {
            "sigma_max": self.sigma_max,
            "jerk_max_theta": self.jerk_max_theta,
            "jerk_max_r": self.jerk_max_r,
            "resonance_gap_min": self.resonance_gap_min,
        }


def von_mises(s11, s22, s12, classical=False):
    """Equivalent stress of a plane stress state.

    The default is the expression
    ``sqrt(3/2 (s11^2 + 2 s12^2 + s22^2) - 1/2 (s11^2 + s22^2))``,
    evaluated in its reduced form ``sqrt(s11^2 + s22^2 + 3 s12^2)``.
    ``classical=True`` adds the ``-s11 s22`` cross term of the usual
    plane-stress form.

    Components are scaled by their largest magnitude before squaring, which
    avoids overflow and underflow and makes ``(s, 0, 0) -> |s|`` and
    ``(0, 0, t) -> sqrt(3) |t|`` exact in floating point.
    """
    s11, s22, s12 = np.broadcast_arrays(*(np.asarray(s, dtype=float) for s in (s11, s22, s12)))
    m = np.maximum(np.maximum(np.abs(s11), np.abs(s22)), np.abs(s12))
    safe = np.where(m > 0, m, 1.0)
    a, b, c = s11 / safe, s22 / safe, s12 / safe
    if classical:
        sq = a * a - a * b + b * b + 3.0 * (c * c)
    else:
        sq = a * a + b * b + 3.0 * (c * c)
    out = m * np.sqrt(np.maximum(sq, 0.0))
    return float(out) if out.ndim == 0 else out


def _ratio(limit, attained):
    return math.inf if attained == 0.0 else limit / attained


@dataclass
class SafetyReport:
    """Outcome of one safety evaluation.

    ``margins`` are limit / attained (``inf`` when nothing is attained);
    the gap margin is the smallest gap over ``resonance_gap_min``.
    """

    peak_stress: float
    peak_stress_x: float
    peak_stress_t: float
    peak_theta_jerk: float
    peak_theta_jerk_t: float
    peak_r_jerk: float
    peak_r_jerk_t: float
    resonance_gaps: list
    margins: dict
    passed: bool
    plate_peak_von_mises: float | None = None
    limits: SafetyLimits | None = field(default=None, repr=False)

    def to_dict(self):
        def finite(v):
            return None if v is None or math.isinf(v) else v

        out = {
            "pass": self.passed,
            "peak_stress": self.peak_stress,
            "peak_stress_x": self.peak_stress_x,
            "peak_stress_t": self.peak_stress_t,
            "peak_theta_jerk": self.peak_theta_jerk,
            "peak_theta_jerk_t": self.peak_theta_jerk_t,
            "peak_r_jerk": self.peak_r_jerk,
            "peak_r_jerk_t": self.peak_r_jerk_t,
            "resonance_gaps": [g.as_dict() for g in self.resonance_gaps],
            # null stands for an unbounded margin
            "margins": {k: finite(v) for k, v in self.margins.items()},
        }
        if self.plate_peak_von_mises is not None:
            out["plate_peak_von_mises"] = self.plate_peak_von_mises
        if self.limits is not None:
            out["limits"] = self.limits.as_dict()
        return out


def evaluate(sim, traj, modal, limits, plate_stresses=None, classical=False, n_jerk=201):
    """Check one simulated trajectory against ``limits``.

    The beam stress is compared as ``|sigma|``.  When ``plate_stresses``
    (a ``(s11, s22, s12)`` triple) is supplied its peak von Mises value also
    counts towards the stress limit.
    """
    T = traj.total_time
    times = np.asarray(sim.times)
    tol = 1e-9 * max(T, 1.0)
    if abs(times[0]) > tol or abs(times[-1] - T) > tol:
        raise InvalidArgumentError(
            f"simulation covers [{times[0]:g}, {times[-1]:g}] but the trajectory lasts {T:g} s"
        )
    s_peak, s_x, s_t = sim.peak_stress()
    vm_peak = None
    attained = s_peak
    if plate_stresses is not None:
        vm_peak = float(np.max(von_mises(*plate_stresses, classical=classical)))
        attained = max(attained, vm_peak)
    jerk = max_jerk(traj, n_jerk)
    gaps = resonance_proximity(traj, modal, flag_below=limits.resonance_gap_min)
    min_gap = min(g.gap for g in gaps)
    margins = {
        "stress": _ratio(limits.sigma_max, attained),
        "theta_jerk": _ratio(limits.jerk_max_theta, jerk.theta.value),
        "r_jerk": _ratio(limits.jerk_max_r, jerk.r.value),
        "resonance_gap": min_gap / limits.resonance_gap_min,
    }
    passed = (
        attained <= limits.sigma_max
        and jerk.theta.value <= limits.jerk_max_theta
        and jerk.r.value <= limits.jerk_max_r
        and min_gap >= limits.resonance_gap_min
    )
    return SafetyReport(
        peak_stress=s_peak, peak_stress_x=s_x, peak_stress_t=s_t,
        peak_theta_jerk=jerk.theta.value, peak_theta_jerk_t=jerk.theta.time,
        peak_r_jerk=jerk.r.value, peak_r_jerk_t=jerk.r.time,
        resonance_gaps=gaps, margins=margins, passed=bool(passed),
        plate_peak_von_mises=vm_peak, limits=limits,
    )


def rest_to_rest_family(generator, theta0, theta1, R):
    """``T -> Trajectory`` for a fixed start and end pose."""

    def family(T):
        return rest_to_rest(generator, theta0, theta1, R, T)

    family.description = {"generator": generator, "theta0": theta0, "theta1": theta1, "R": R}
    return family


@dataclass
class ScanPoint:
    T: float
    passed: bool
    peak_stress: float
    peak_theta_jerk: float
    peak_r_jerk: float
    min_gap: float
    refined: bool = False

    def as_dict(self):
        return {"T": self.T, "pass": self.passed, "peak_stress": self.peak_stress,
                "peak_theta_jerk": self.peak_theta_jerk, "peak_r_jerk": self.peak_r_jerk,
                "min_gap": self.min_gap, "refined": self.refined}


@dataclass
class MinTimeResult:
    """Smallest passing duration and everything evaluated on the way.

    ``transitions`` holds the final ``(T_fail, T_pass)`` bracket of every
    fail-to-pass change found in the scan.
    """

    T_star: float
    scan: list
    transitions: list
    rtol: float

    def as_dict(self):
        return {
            "T_star": self.T_star,
            "rtol": self.rtol,
            "transitions": [list(b) for b in self.transitions],
            "scan": [p.as_dict() for p in self.scan],
        }


def _default_dt(model, T):
    period = 2.0 * math.pi / (1.875104068711961**2 * model.natural_frequency_scale())
    return min(period / 20.0, T / 100.0)


def min_time_search(family, model, limits, T_bounds, dt=None, g=9.81, n_modes=3,
                    workers=1, n_scan=N_SCAN, rtol=REFINE_RTOL):
    """Smallest duration ``T`` in ``T_bounds`` for which ``family(T)`` is safe.

    ``n_scan`` log-spaced durations are evaluated first.  Every fail-to-pass
    change in the sorted scan is then narrowed by geometric bisection until
    the bracket is below ``rtol`` relative width.  Monotonicity in ``T`` is
    not assumed.  ``dt`` defaults to the smaller of a twentieth of the
    fundamental period and ``T / 100``.

    Raises
    ------
    InfeasibleError
        If no evaluated duration passes; the scan is attached.
    """
    T_lo, T_hi = (float(v) for v in T_bounds)
    if not (0 < T_lo < T_hi):
        raise InvalidArgumentError(f"need 0 < T_lo < T_hi, got {T_bounds!r}")
    if n_scan < 2:
        raise InvalidArgumentError("n_scan must be at least 2")
    modal = modal_analysis(model, n_modes)

    def run(T, refined=False):
        traj = family(T)
        step = _default_dt(model, T) if dt is None else min(dt, T / 20.0)
        rep = evaluate(simulate(model, traj, step, g), traj, modal, limits)
        return ScanPoint(T, rep.passed, rep.peak_stress, rep.peak_theta_jerk, rep.peak_r_jerk,
                         min(gp.gap for gp in rep.resonance_gaps), refined)

    Ts = np.geomspace(T_lo, T_hi, n_scan)
    Ts[0], Ts[-1] = T_lo, T_hi
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scan = list(pool.map(run, [float(t) for t in Ts]))
    else:
        scan = [run(float(t)) for t in Ts]
    scan.sort(key=lambda p: p.T)

    brackets = [(a, b) for a, b in zip(scan[:-1], scan[1:]) if not a.passed and b.passed]
    refined_pts, transitions = [], []
    for lo, hi in brackets:
        while (hi.T - lo.T) > rtol * hi.T:
            mid = run(math.sqrt(lo.T * hi.T), refined=True)
            refined_pts.append(mid)
            if mid.passed:
                hi = mid
            else:
                lo = mid
        transitions.append((lo.T, hi.T))
    table = sorted(scan + refined_pts, key=lambda p: p.T)
    passing = [p.T for p in table if p.passed]
    if not passing:
        raise InfeasibleError(
            f"no duration in [{T_lo:g}, {T_hi:g}] s satisfies the limits", [p.as_dict() for p in table]
        )
    return MinTimeResult(min(passing), table, transitions, rtol)
