"""Beam model, discrete state and the assembled linear system."""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError


class Backend(str, enum.Enum):
    FiniteDifference = "fd"
    HermiteFEM = "fem"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {
            "fd": cls.FiniteDifference,
            "finitedifference": cls.FiniteDifference,
            "finite_difference": cls.FiniteDifference,
            "fem": cls.HermiteFEM,
            "hermitefem": cls.HermiteFEM,
            "hermite_fem": cls.HermiteFEM,
        }
        try:
            return aliases[key]
        except KeyError:
            raise InvalidArgumentError(f"unknown backend {value!r}; use 'fd' or 'fem'") from None


@dataclass(frozen=True)
class BeamModel:
    """Uniform cantilever clamped at ``x = 0`` and free at ``x = L``.

    ``rho`` is mass per unit length, ``h`` the half-thickness used for stress
    recovery.  ``n_nodes`` counts grid points including the clamped root.
    """

    E: float
    I: float
    rho: float
    L: float
    h: float
    sigma_yield: float
    n_nodes: int = 101
    backend: Backend = Backend.FiniteDifference

    def __post_init__(self):
        for name in ("E", "I", "rho", "L", "h", "sigma_yield"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise InvalidArgumentError(f"{name} must be strictly positive, got {v!r}")
            object.__setattr__(self, name, float(v))
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 5:
            raise InvalidArgumentError(f"n_nodes must be an integer >= 5, got {self.n_nodes!r}")
        object.__setattr__(self, "n_nodes", int(self.n_nodes))
        object.__setattr__(self, "backend", Backend.parse(self.backend))

    @property
    def EI(self):
        return self.E * self.I

    @property
    def x(self):
        return np.linspace(0.0, self.L, self.n_nodes)

    @property
    def dx(self):
        return self.L / (self.n_nodes - 1)

    def natural_frequency_scale(self):
        """``sqrt(EI / (rho L^4))`` [rad/s]; multiply by ``beta_n**2``."""
        return math.sqrt(self.EI / (self.rho * self.L**4))


@dataclass
class BeamState:
    """Free degrees of freedom at time ``t``.

    The FD backend stores nodal deflections of nodes 1..n-1; the FEM backend
    interleaves deflection and slope for the same nodes.  The clamped root is
    never stored, so it is exactly zero in every derived nodal field.
    """

    t: float
    u: np.ndarray
    v: np.ndarray
    backend: Backend
    a: np.ndarray | None = None

    @classmethod
    def zeros(cls, model, t=0.0):
        n = n_dofs(model)
        return cls(t, np.zeros(n), np.zeros(n), model.backend)

    @classmethod
    def from_nodal(cls, model, w, wdot=None, slope=None, slope_rate=None, t=0.0):
        w = np.asarray(w, dtype=float)
        if w.shape != (model.n_nodes,):
            raise InvalidArgumentError(f"w must have {model.n_nodes} entries")
        if w[0] != 0.0:
            raise InvalidArgumentError("the clamped root must have zero deflection")
        wdot = np.zeros_like(w) if wdot is None else np.asarray(wdot, dtype=float)
        if model.backend is Backend.FiniteDifference:
            return cls(t, w[1:].copy(), wdot[1:].copy(), model.backend)
        slope = np.zeros_like(w) if slope is None else np.asarray(slope, dtype=float)
        slope_rate = np.zeros_like(w) if slope_rate is None else np.asarray(slope_rate, dtype=float)
        u = np.empty(2 * (model.n_nodes - 1))
        v = np.empty_like(u)
        u[0::2], u[1::2] = w[1:], slope[1:]
        v[0::2], v[1::2] = wdot[1:], slope_rate[1:]
        return cls(t, u, v, model.backend)

    def _nodal(self, vec, offset):
        if self.backend is Backend.FiniteDifference:
            if offset:
                return None
            return np.concatenate([[0.0], vec])
        return np.concatenate([[0.0], vec[offset::2]])

    @property
    def w(self):
        return self._nodal(self.u, 0)

    @property
    def wdot(self):
        return self._nodal(self.v, 0)

    @property
    def slope(self):
        return self._nodal(self.u, 1)

    @property
    def slope_rate(self):
        return self._nodal(self.v, 1)


def n_dofs(model):
    per_node = 1 if model.backend is Backend.FiniteDifference else 2
    return per_node * (model.n_nodes - 1)


@dataclass(frozen=True)
class BeamSystem:
    """Assembled matrices on the free degrees of freedom.

    ``K`` and ``M`` are symmetric with half-bandwidth ``bandwidth``; ``F`` maps
    nodal load samples [N/m] to generalized forces, so the semi-discrete
    problem reads ``M u'' + K u = F q``.
    """

    model: BeamModel
    K: np.ndarray
    M: np.ndarray
    F: np.ndarray
    bandwidth: int
    mass_is_diagonal: bool = field(default=False)

    def strain_energy(self, u):
        return 0.5 * float(u @ (self.K @ u))

    def kinetic_energy(self, v):
        return 0.5 * float(v @ (self.M @ v))


@functools.lru_cache(maxsize=32)
def assemble(model):
    """Build (and cache) the :class:`BeamSystem` for ``model``'s backend."""
    if model.backend is Backend.FiniteDifference:
        from .fd import assemble_fd

        return assemble_fd(model)
    from .fem import assemble_fem_system

    return assemble_fem_system(model)
