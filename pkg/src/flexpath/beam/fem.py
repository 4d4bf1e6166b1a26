"""Two-node Hermite-cubic Euler-Bernoulli elements.

Element integrals come from Gauss-Legendre rules that are exact for the
polynomial integrands: 2 points for stiffness (degree 2), 4 for the
consistent mass (degree 6), 3 for the linearly interpolated load (degree 4).
"""
from __future__ import annotations

import numpy as np

from .model import Backend, BeamSystem


def shape_functions(xi, le):
    """Hermite shape functions on ``xi in [0, 1]`` for an element of length ``le``."""
    xi = np.asarray(xi, dtype=float)
    return np.stack(
        [
            1 - 3 * xi**2 + 2 * xi**3,
            le * (xi - 2 * xi**2 + xi**3),
            3 * xi**2 - 2 * xi**3,
            le * (-(xi**2) + xi**3),
        ],
        axis=-1,
    )


def shape_second_derivatives(xi, le):
    """d^2N/dx^2 (physical coordinate) for the four shape functions."""
    xi = np.asarray(xi, dtype=float)
    return np.stack(
        [
            (-6 + 12 * xi) / le**2,
            (-4 + 6 * xi) / le,
            (6 - 12 * xi) / le**2,
            (-2 + 6 * xi) / le,
        ],
        axis=-1,
    )


def _gauss(npts):
    pts, wts = np.polynomial.legendre.leggauss(npts)
    return 0.5 * (pts + 1.0), 0.5 * wts


def element_stiffness(EI, le):
    xi, wq = _gauss(2)
    B = shape_second_derivatives(xi, le)
    return EI * le * np.einsum("q,qi,qj->ij", wq, B, B)


def element_mass(rho, le):
    xi, wq = _gauss(4)
    N = shape_functions(xi, le)
    return rho * le * np.einsum("q,qi,qj->ij", wq, N, N)


def element_load(le):
    """4x2 matrix mapping end-node load values to consistent nodal forces."""
    xi, wq = _gauss(3)
    N = shape_functions(xi, le)
    lin = np.stack([1 - xi, xi], axis=-1)
    return le * np.einsum("q,qi,qj->ij", wq, N, lin)


def assemble_global(model):
    """Unconstrained global (K, M, F) with DOFs ordered (w0, w0', w1, w1', ...)."""
    n, le = model.n_nodes, model.dx
    nd = 2 * n
    K = np.zeros((nd, nd))
    M = np.zeros((nd, nd))
    F = np.zeros((nd, n))
    ke = element_stiffness(model.EI, le)
    me = element_mass(model.rho, le)
    fe = element_load(le)
    for e in range(n - 1):
        dofs = slice(2 * e, 2 * e + 4)
        K[dofs, dofs] += ke
        M[dofs, dofs] += me
        F[dofs, e : e + 2] += fe
    return K, M, F


def assemble_fem(model, constrained=True):
    """Global stiffness and consistent mass.

    With ``constrained`` (the default) the clamped root's deflection and slope
    rows/columns are eliminated.
    """
    if model.backend is not Backend.HermiteFEM:
        from dataclasses import replace

        model = replace(model, backend=Backend.HermiteFEM)
    K, M, _ = assemble_global(model)
    if constrained:
        return K[2:, 2:].copy(), M[2:, 2:].copy()
    return K, M


def assemble_fem_system(model):
    K, M, F = assemble_global(model)
    K, M, F = K[2:, 2:].copy(), M[2:, 2:].copy(), F[2:, :].copy()
    for a in (K, M, F):
        a.setflags(write=False)
    return BeamSystem(model, K, M, F, bandwidth=3, mass_is_diagonal=False)


def curvature(w, slope, le):
    """Nodal curvature of the Hermite interpolant.

    Element-end values are exact for the cubic; at interior nodes the two
    adjacent elements are averaged.
    """
    w = np.asarray(w, dtype=float)
    slope = np.asarray(slope, dtype=float)
    d = np.stack([w[:-1], slope[:-1], w[1:], slope[1:]], axis=-1)
    left = d @ shape_second_derivatives(0.0, le)
    right = d @ shape_second_derivatives(1.0, le)
    k = np.empty_like(w)
    k[0] = left[0]
    k[-1] = right[-1]
    k[1:-1] = 0.5 * (right[:-1] + left[1:])
    return k
