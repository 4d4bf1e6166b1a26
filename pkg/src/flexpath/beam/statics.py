"""Static and quasi-static cantilever solves and stress recovery."""
from __future__ import annotations

import numpy as np

from ..errors import InvalidArgumentError
from . import banded, fd, fem
from .model import Backend, BeamState, assemble


def _check_load(model, q):
    q = np.asarray(q, dtype=float)
    if q.ndim == 0:
        q = np.full(model.n_nodes, float(q))
    if q.shape != (model.n_nodes,):
        raise InvalidArgumentError(f"load needs {model.n_nodes} nodal samples, got shape {q.shape}")
    return q


def solve_static_state(model, q, spin_sq=0.0):
    """Solve ``EI w'''' - rho*spin_sq*w = q`` with clamped-free ends.

    ``spin_sq`` is the squared rotation rate; it softens the rod exactly as
    the centrifugal term of the moving-frame load does.
    """
    q = _check_load(model, q)
    sys = assemble(model)
    A = sys.K - spin_sq * sys.M if spin_sq else sys.K
    u = banded.solve(A, sys.F @ q, sys.bandwidth)
    return BeamState(0.0, u, np.zeros_like(u), model.backend)


def solve_static(model, q, spin_sq=0.0):
    """Nodal deflections [m] of the cantilever under nodal load samples ``q`` [N/m]."""
    return solve_static_state(model, q, spin_sq).w


def stress(model, w, slope=None):
    """Bending stress ``-h E w''`` at the nodes [Pa].

    With the FEM backend and nodal ``slope`` supplied, the exact Hermite
    curvature is used; otherwise curvature comes from finite differences.
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (model.n_nodes,):
        raise InvalidArgumentError(f"w needs {model.n_nodes} entries, got shape {w.shape}")
    if model.backend is Backend.HermiteFEM and slope is not None:
        kappa = fem.curvature(w, slope, model.dx)
    else:
        kappa = fd.curvature(w, model.dx)
    return -model.h * model.E * kappa


def state_stress(model, state):
    return stress(model, state.w, state.slope)
