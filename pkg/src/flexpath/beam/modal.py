"""Cantilever characteristic roots, mode shapes and resonance proximity."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ..errors import InvalidArgumentError
from ..trajectory import _golden_max
from .model import assemble

MAX_ROOTS = 12
FLAG_GAP = 0.1


def characteristic_function(beta):
    """``cos(beta) cosh(beta) + 1``; zero at the clamped-free eigenvalues."""
    return np.cos(beta) * np.cosh(beta) + 1.0


def scaled_characteristic_function(beta):
    """``cos(beta) + sech(beta)``: same roots, derivative of order one."""
    return np.cos(beta) + 1.0 / np.cosh(beta)


def _bisect(f, a, b, tol):
    fa = f(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = f(m)
        if abs(fm) < tol or b - a < 4e-16 * m:
            return m
        if (fa < 0) == (fm < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def characteristic_roots(n):
    """First ``n`` positive roots of ``cos(b) cosh(b) + 1 = 0`` (``1 <= n <= 12``).

    Each root is bracketed around ``(2k-1) pi / 2``, bisected on the
    sech-scaled function (whose slope is O(1), so a 1e-12 stopping test is
    meaningful at every k) and polished by one Newton step.
    """
    if not (int(n) == n and 1 <= n <= MAX_ROOTS):
        raise InvalidArgumentError(f"n must be an integer in [1, {MAX_ROOTS}], got {n!r}")
    f = scaled_characteristic_function
    roots = []
    for k in range(1, int(n) + 1):
        c = (2 * k - 1) * math.pi / 2
        a, b = c - 0.5, c + 0.5
        if k == 1:
            a, b = 1.5, 2.0
        beta = _bisect(f, a, b, 1e-12)
        df = -math.sin(beta) - math.tanh(beta) / math.cosh(beta)
        step = f(beta) / df
        if abs(step) < 1e-10:
            beta -= step
        roots.append(float(beta))
    return roots


def _mode_ratio(beta):
    return (math.cosh(beta) + math.cos(beta)) / (math.sin(beta) + math.sinh(beta))


def mode_shape_raw(beta, x, derivative=0):
    """Unnormalized mode ``cosh - cos + s (sin - sinh)`` or one of its x-derivatives.

    ``x`` is the dimensionless position; derivatives are with respect to it.
    """
    if not beta > 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    if derivative not in (0, 1, 2, 3, 4):
        raise InvalidArgumentError("derivative order must be 0..4")
    s = _mode_ratio(beta)
    bx = beta * np.asarray(x, dtype=float)
    ch, sh, c, sn = np.cosh(bx), np.sinh(bx), np.cos(bx), np.sin(bx)
    # derivative cycles: cosh->sinh->cosh, cos->-sin->-cos->sin, sin->cos->-sin->-cos
    terms = {
        0: ch - c + s * (sn - sh),
        1: sh + sn + s * (c - ch),
        2: ch + c + s * (-sn - sh),
        3: sh - sn + s * (-c - ch),
        4: ch - c + s * (sn - sh),
    }
    return beta**derivative * terms[derivative]


def mode_shape(beta, x, derivative=0):
    """Clamped-free mode shape scaled to unit tip deflection, ``w(1) = 1``."""
    return mode_shape_raw(beta, x, derivative) / float(mode_shape_raw(beta, 1.0))


@dataclass
class ModalResult:
    """Analytic and discrete modal data for a beam model.

    ``residuals`` are ``|cos b cosh b + 1|`` evaluated at the stored double
    precision roots; ``scaled_residuals`` divide that by ``cosh b``.
    """

    betas: list
    residuals: list
    scaled_residuals: list
    x: np.ndarray
    mode_shapes: np.ndarray
    natural_rates: list
    omegas: list
    discrete_omegas: list
    relative_deviation: list
    T: float = 1.0

    def as_dict(self):
        return {
            "betas": list(self.betas),
            "residuals": list(self.residuals),
            "scaled_residuals": list(self.scaled_residuals),
            "natural_rates": list(self.natural_rates),
            "omegas": list(self.omegas),
            "discrete_omegas": list(self.discrete_omegas),
            "relative_deviation": list(self.relative_deviation),
            "time_scale": self.T,
        }


def discrete_frequencies(model, n_modes):
    """Smallest ``n_modes`` angular frequencies of the assembled ``(K, M)`` pencil [rad/s]."""
    sys = assemble(model)
    n = min(n_modes, sys.K.shape[0])
    vals = linalg.eigh(sys.K, sys.M, eigvals_only=True, subset_by_index=[0, n - 1])
    return [math.sqrt(max(v, 0.0)) for v in vals]


def discrete_modes(model, n_modes):
    """Discrete eigenpairs ``(omegas, vectors)`` on the free DOFs."""
    sys = assemble(model)
    vals, vecs = linalg.eigh(sys.K, sys.M, subset_by_index=[0, n_modes - 1])
    return np.sqrt(np.maximum(vals, 0.0)), vecs


def modal_analysis(model, n_modes, T=1.0):
    """Natural rates of the clamped-free rod.

    The rotation rate at which the quasi-static rotating rod admits a
    non-trivial shape is ``omega_n = beta_n**2 sqrt(EI/(rho L^4))``; in the
    time scale ``T`` it reads ``sqrt(lam) beta_n**2 = omega_n T``.
    """
    if not (int(n_modes) == n_modes and n_modes >= 1):
        raise InvalidArgumentError(f"n_modes must be a positive integer, got {n_modes!r}")
    if not T > 0:
        raise InvalidArgumentError("time scale must be positive")
    betas = characteristic_roots(n_modes)
    xs = model.x / model.L
    shapes = np.array([mode_shape(b, xs) for b in betas])
    scale = model.natural_frequency_scale()
    omegas = [b**2 * scale for b in betas]
    lam = model.EI * T**2 / (model.rho * model.L**4)
    rates = [math.sqrt(lam) * b**2 for b in betas]
    disc = discrete_frequencies(model, n_modes)
    dev = [(d - o) / o for d, o in zip(disc, omegas)]
    return ModalResult(
        betas=betas,
        residuals=[float(abs(characteristic_function(b))) for b in betas],
        scaled_residuals=[float(abs(scaled_characteristic_function(b))) for b in betas],
        x=model.x,
        mode_shapes=shapes,
        natural_rates=rates,
        omegas=omegas,
        discrete_omegas=disc,
        relative_deviation=dev,
        T=T,
    )


@dataclass
class ModeGap:
    mode: int
    omega: float
    gap: float
    time: float
    flagged: bool

    def as_dict(self):
        return {"mode": self.mode, "omega": self.omega, "gap": self.gap, "time": self.time,
                "flagged": self.flagged}


def resonance_proximity(traj, modal, n_samples=2001, flag_below=FLAG_GAP):
    """Closest approach of ``|theta'(t)|`` to each natural rate, relative to that rate.

    Crossings are located by bisection (gap 0); otherwise the sampled
    minimum is refined by golden-section search.
    """
    omegas = list(modal.omegas)
    if not omegas:
        raise InvalidArgumentError("modal result has no modes")
    T = traj.total_time
    ts = np.linspace(0.0, T, n_samples)
    rate = np.abs(np.asarray(traj.theta.evaluate(ts, 1), dtype=float))
    out = []
    for k, om in enumerate(omegas, start=1):
        diff = rate - om

        def neg_gap(t, om=om):
            return -abs(abs(float(traj.theta.evaluate(t, 1))) - om) / om

        cross = np.nonzero(np.signbit(diff[:-1]) != np.signbit(diff[1:]))[0]
        if np.any(diff == 0.0):
            i = int(np.nonzero(diff == 0.0)[0][0])
            gap, when = 0.0, float(ts[i])
        elif cross.size:
            i = int(cross[0])
            a, b = ts[i], ts[i + 1]
            fa = float(diff[i])
            for _ in range(100):
                m = 0.5 * (a + b)
                fm = abs(float(traj.theta.evaluate(m, 1))) - om
                if (fm < 0) == (fa < 0):
                    a, fa = m, fm
                else:
                    b = m
            gap, when = 0.0, 0.5 * (a + b)
        else:
            i = int(np.argmin(np.abs(diff)))
            gap, when = float(abs(diff[i]) / om), float(ts[i])
            lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, n_samples - 1)]
            if hi > lo:
                t_ref, v_ref = _golden_max(neg_gap, lo, hi)
                if -v_ref < gap:
                    gap, when = -v_ref, float(t_ref)
        out.append(ModeGap(k, om, gap, when, gap < flag_below))
    return out
