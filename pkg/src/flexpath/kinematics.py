"""Moving-frame mechanics: angular velocity, inertial acceleration, fictitious
forces, the transverse load on the rotating rod, and its scaling groups."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgumentError, InvalidRotationError

ORTHOGONALITY_TOL = 1e-10
SKEW_TOL = 1e-8


def _vec3(v, name):
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise InvalidArgumentError(f"{name} must be a 3-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class RotationSample:
    """Frame map ``R`` and its time derivative ``Rdot`` at one instant."""

    R: np.ndarray
    Rdot: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R, dtype=float)
        Rdot = np.asarray(self.Rdot, dtype=float)
        if R.shape != (3, 3) or Rdot.shape != (3, 3):
            raise InvalidRotationError("R and Rdot must be 3x3 matrices")
        defect = np.linalg.norm(R.T @ R - np.eye(3))
        if defect > ORTHOGONALITY_TOL:
            raise InvalidRotationError(f"R is not orthogonal (|R^T R - I| = {defect:.3e})")
        det = np.linalg.det(R)
        if abs(det - 1.0) > ORTHOGONALITY_TOL:
            raise InvalidRotationError(f"R is not a proper rotation (det = {det:.15g})")
        R.setflags(write=False)
        Rdot.setflags(write=False)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "Rdot", Rdot)


@dataclass(frozen=True)
class FrameMotion:
    """Angular velocity, angular acceleration and origin acceleration of a frame."""

    omega: np.ndarray
    omega_dot: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        for name in ("omega", "omega_dot", "A"):
            v = _vec3(getattr(self, name), name)
            if not np.all(np.isfinite(v)):
                raise InvalidArgumentError(f"{name} must be finite")
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @classmethod
    def at_rest(cls):
        return cls(np.zeros(3), np.zeros(3), np.zeros(3))


class AngularVelocity(NamedTuple):
    omega: np.ndarray
    skew_defect: float


class FictitiousForces(NamedTuple):
    euler: np.ndarray
    coriolis: np.ndarray
    centrifugal: np.ndarray
    translational: np.ndarray


class BeamLoad(NamedTuple):
    """Transverse load per unit length and its four labelled contributions [N/m]."""

    q: np.ndarray
    acceleration: np.ndarray
    gravity: np.ndarray
    centrifugal: np.ndarray
    euler: np.ndarray


@dataclass(frozen=True)
class DimensionlessGroups:
    lam: float
    Fr: float
    mu: float
    nu: float

    def as_dict(self):
        return {"lambda": self.lam, "Fr": self.Fr, "mu": self.mu, "nu": self.nu}


def axis_rotation(axis, rate, t=0.0):
    """Rotation about a unit axis at constant ``rate`` sampled at time ``t``.

    Uses Rodrigues' formula; ``Rdot = rate * [n]_x R``.
    """
    n = _vec3(axis, "axis")
    n = n / np.linalg.norm(n)
    K = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    ang = rate * t
    R = np.eye(3) + math.sin(ang) * K + (1.0 - math.cos(ang)) * (K @ K)
    return RotationSample(R, rate * (K @ R))


def angular_velocity(rs):
    """Extract omega from the skew matrix ``Rdot R^T``.

    Returns the vector together with ``|Omega + Omega^T|``, which must stay
    below 1e-8 for a consistent (R, Rdot) pair.
    """
    Omega = rs.Rdot @ rs.R.T
    defect = float(np.linalg.norm(Omega + Omega.T))
    if defect > SKEW_TOL * max(1.0, float(np.linalg.norm(Omega))):
        raise InvalidRotationError(f"Rdot R^T is not skew-symmetric (defect {defect:.3e})")
    omega = np.array([Omega[2, 1], Omega[0, 2], Omega[1, 0]])
    return AngularVelocity(omega, defect)


def inertial_acceleration(a, fm, r, Dr):
    """Acceleration seen in the fixed frame for a point moving in the rotating one."""
    a, r, Dr = _vec3(a, "a"), _vec3(r, "r"), _vec3(Dr, "Dr")
    w = fm.omega
    return a + np.cross(fm.omega_dot, r) + 2.0 * np.cross(w, Dr) + np.cross(w, np.cross(w, r)) + fm.A


def fictitious_forces(m, fm, r, Dr):
    """Euler, Coriolis, centrifugal and origin-translation forces on a mass ``m``.

    Signs are those that appear on the right of Newton's law written in the
    moving frame, so ``m a = F + euler + coriolis + centrifugal + translational``.
    """
    if not m > 0:
        raise InvalidArgumentError(f"mass must be positive, got {m}")
    r, Dr = _vec3(r, "r"), _vec3(Dr, "Dr")
    w = fm.omega
    return FictitiousForces(
        euler=-m * np.cross(fm.omega_dot, r),
        coriolis=-2.0 * m * np.cross(w, Dr),
        centrifugal=-m * np.cross(w, np.cross(w, r)),
        translational=m * fm.A,
    )


def beam_load(x, w, theta, r, rho, g=9.81):
    """Transverse load on the rotating, extending rod.

    ``q = rho (r'' sin(theta) - g cos(theta) + theta'^2 w - theta'' x)``

    ``theta`` and ``r`` are :class:`~flexpath.trajectory.KinematicSample`
    values; ``x`` and ``w`` may be scalars or equal-length arrays.  ``theta = 0``
    is the horizontal rod, which carries the full weight.
    """
    if not rho > 0:
        raise InvalidArgumentError(f"linear density must be positive, got {rho}")
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    acc = rho * r.d2 * math.sin(theta.value) + 0.0 * x
    grav = -rho * g * math.cos(theta.value) + 0.0 * x
    cent = rho * theta.d1**2 * w + 0.0 * x
    euler = -rho * theta.d2 * x
    return BeamLoad(acc + grav + cent + euler, acc, grav, cent, euler)


def nondimensional_groups(E, I, rho, L, T, W, R, g=9.81):
    """Scaling groups of the rotating-rod problem.

    ``lam = E I T^2 / (rho L^4)``, ``Fr = sqrt(W / (g T^2))``, ``mu = R/W``,
    ``nu = L/W``.
    """
    args = dict(E=E, I=I, rho=rho, L=L, T=T, W=W, g=g)
    for k, v in args.items():
        if not (v > 0 and math.isfinite(v)):
            raise InvalidArgumentError(f"{k} must be strictly positive, got {v}")
    if not (R >= 0 and math.isfinite(R)):
        raise InvalidArgumentError(f"R must be non-negative, got {R}")
    return DimensionlessGroups(
        lam=E * I * T**2 / (rho * L**4),
        Fr=math.sqrt(W / (g * T**2)),
        mu=R / W,
        nu=L / W,
    )
