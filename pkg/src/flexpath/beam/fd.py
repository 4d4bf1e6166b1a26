"""Finite-difference cantilever operator.

Uniform grid, 5-point stencil for w''''.  Ghost nodes close the stencil:
``w[-1] = w[1]`` (zero root slope), and beyond the tip ``w[n] = 2 w[n-1] - w[n-2]``,
``w[n+1] = 4 w[n-1] - 4 w[n-2] + w[n-3]`` (zero moment and shear).  The tip
row is halved, which makes the operator symmetric and matches a half control
volume at the free end.  Rows are multiplied by ``dx`` so the quadratic forms
are energies in joules.
"""
from __future__ import annotations

import numpy as np

from .model import BeamSystem

_STENCIL = (1.0, -4.0, 6.0, -4.0, 1.0)


def _ghost_map(n):
    """Express node index k (possibly a ghost) as {free_index: coefficient}."""

    def node(k):
        if k == 0:
            return {}
        if 1 <= k <= n - 1:
            return {k - 1: 1.0}
        if k == -1:
            return {0: 1.0}
        if k == n:
            return {n - 2: 2.0, n - 3: -1.0}
        if k == n + 1:
            return {n - 2: 4.0, n - 3: -4.0, n - 4: 1.0}
        raise IndexError(k)

    return node


def operator_matrix(n):
    """Dimensionless symmetric matrix ``S`` with ``S w ~ dx^4 w''''`` (tip row halved)."""
    node = _ghost_map(n)
    m = n - 1
    S = np.zeros((m, m))
    for i in range(1, n):
        for off, c in zip(range(-2, 3), _STENCIL):
            for j, a in node(i + off).items():
                S[i - 1, j] += c * a
    S[-1] *= 0.5
    return S


def tip_weights(n):
    wts = np.ones(n - 1)
    wts[-1] = 0.5
    return wts


def assemble_fd(model):
    n, dx = model.n_nodes, model.dx
    wts = tip_weights(n)
    K = model.EI / dx**3 * operator_matrix(n)
    M = np.diag(model.rho * dx * wts)
    F = np.zeros((n - 1, n))
    F[:, 1:] = np.diag(dx * wts)
    for a in (K, M, F):
        a.setflags(write=False)
    return BeamSystem(model, K, M, F, bandwidth=2, mass_is_diagonal=True)


def curvature(w, dx):
    """Second derivative on the grid: central inside, one-sided 2nd order at the ends."""
    w = np.asarray(w, dtype=float)
    k = np.empty_like(w)
    k[1:-1] = (w[:-2] - 2.0 * w[1:-1] + w[2:]) / dx**2
    k[0] = (2.0 * w[0] - 5.0 * w[1] + 4.0 * w[2] - w[3]) / dx**2
    k[-1] = (2.0 * w[-1] - 5.0 * w[-2] + 4.0 * w[-3] - w[-4]) / dx**2
    return k
