"""Quasi-static Kirchhoff-Love plate on a rectangle.

``D lap(lap(w0)) + k w0 = -q`` on ``[0, a] x [0, b]``, discretized with the
13-point biharmonic stencil on a uniform grid padded by two ghost layers.

Boundary treatment:

* clamped edge: ``w0 = 0`` and zero normal slope (ghosts mirror the interior);
* free edge, ``free_edge="laplacian"``: ``lap(w0) = 0`` and ``d lap(w0) / dn = 0``.
  These two conditions make ``lap(w0)`` the solution of an elliptic Cauchy
  problem near the edge, and the discrete system turns out singular (its null
  space grows with the grid).  Models with a free edge in this mode are
  rejected before the solve;
* free edge, ``free_edge="classical"``: zero normal moment
  ``w_nn + nu w_tt = 0`` and zero effective shear ``w_nnn + (2 - nu) w_ntt = 0``,
  with ``w_xy = 0`` at a corner between two free edges;
* corner ghosts mirror across an adjacent clamped edge, or, between two free
  edges, are extrapolated with zero twist.

Rows are indexed ``[i, j]`` with ``i`` along x and ``j`` along y.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as splinalg

from .errors import InvalidArgumentError, NumericalFailureError, OutOfRangeError

EDGES = ("left", "right", "bottom", "top")
FREE_EDGE_MODES = ("laplacian", "classical")


@dataclass(frozen=True)
class PlateModel:
    """Rectangular plate of thickness ``2 h``; ``rho`` is volumetric density."""

    E: float
    nu: float
    h: float
    rho: float
    a: float
    b: float
    nx: int = 65
    ny: int = 65
    clamped_edges: frozenset = field(default_factory=lambda: frozenset(EDGES))
    k: float = 0.0
    free_edge: str = "laplacian"

    def __post_init__(self):
        for name in ("E", "h", "a", "b"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise InvalidArgumentError(f"{name} must be strictly positive, got {v!r}")
        if not (0.0 < self.nu < 0.5):
            raise InvalidArgumentError(f"Poisson ratio must lie in (0, 0.5), got {self.nu!r}")
        if not self.rho >= 0:
            raise InvalidArgumentError("density must be non-negative")
        if not self.k >= 0:
            raise InvalidArgumentError("foundation stiffness k must be non-negative")
        for name in ("nx", "ny"):
            v = getattr(self, name)
            if int(v) != v or v < 9:
                raise InvalidArgumentError(f"{name} must be an integer >= 9, got {v!r}")
            object.__setattr__(self, name, int(v))
        edges = frozenset(self.clamped_edges)
        unknown = edges - set(EDGES)
        if unknown:
            raise InvalidArgumentError(f"unknown edges {sorted(unknown)}; use {EDGES}")
        if not edges:
            raise InvalidArgumentError("at least one edge must be clamped")
        object.__setattr__(self, "clamped_edges", edges)
        if self.free_edge not in FREE_EDGE_MODES:
            raise InvalidArgumentError(f"free_edge must be one of {FREE_EDGE_MODES}, got {self.free_edge!r}")

    @property
    def dx(self):
        return self.a / (self.nx - 1)

    @property
    def dy(self):
        return self.b / (self.ny - 1)

    @property
    def D(self):
        return bending_stiffness(self.E, self.nu, self.h)

    def grid(self):
        """Coordinate arrays ``(X, Y)`` with ``X[i, j] = i dx``."""
        return np.meshgrid(np.linspace(0, self.a, self.nx), np.linspace(0, self.b, self.ny),
                           indexing="ij")

    def self_weight(self, g=9.81):
        """Weight per unit area ``2 h rho g`` [N/m^2]."""
        return 2.0 * self.h * self.rho * g


class StrainField(NamedTuple):
    e11: np.ndarray
    e22: np.ndarray
    e12: np.ndarray


class StressField(NamedTuple):
    s11: np.ndarray
    s22: np.ndarray
    s12: np.ndarray


class Moments(NamedTuple):
    M11: np.ndarray
    M22: np.ndarray
    M12: np.ndarray


@dataclass
class PlateSolution:
    model: PlateModel
    w0: np.ndarray
    M11: np.ndarray
    M22: np.ndarray
    M12: np.ndarray
    sigma_top: StressField


def bending_stiffness(E, nu, h):
    """``D = 2 h^3 E / (3 (1 - nu^2))`` for half-thickness ``h``."""
    if not (0.0 <= nu < 0.5):
        raise InvalidArgumentError(f"Poisson ratio must lie in [0, 0.5), got {nu!r}")
    return 2.0 * h**3 * E / (3.0 * (1.0 - nu**2))


def _d1(w, d, axis):
    return np.gradient(w, d, axis=axis, edge_order=2)


def _d2(w, d, axis):
    w = np.moveaxis(np.asarray(w, dtype=float), axis, 0)
    out = np.empty_like(w)
    out[1:-1] = (w[:-2] - 2.0 * w[1:-1] + w[2:]) / d**2
    out[0] = (2.0 * w[0] - 5.0 * w[1] + 4.0 * w[2] - w[3]) / d**2
    out[-1] = (2.0 * w[-1] - 5.0 * w[-2] + 4.0 * w[-3] - w[-4]) / d**2
    return np.moveaxis(out, 0, axis)


def curvatures(w0, dx, dy):
    """``(w_xx, w_yy, w_xy)`` by second-order finite differences."""
    return _d2(w0, dx, 0), _d2(w0, dy, 1), _d1(_d1(w0, dx, 0), dy, 1)


def laplacian(w0, dx, dy):
    wxx, wyy, _ = curvatures(w0, dx, dy)
    return wxx + wyy


def plate_strains(model, w0, z):
    """In-plane strains at height ``z`` including the quadratic membrane terms."""
    if abs(z) > model.h * (1 + 1e-12):
        raise OutOfRangeError(f"|z|={abs(z)!r} exceeds the half-thickness {model.h!r}")
    return strains_from_grid(w0, z, model.dx, model.dy)


def strains_from_grid(w0, z, dx, dy):
    w0 = np.asarray(w0, dtype=float)
    wx, wy = _d1(w0, dx, 0), _d1(w0, dy, 1)
    wxx, wyy, wxy = curvatures(w0, dx, dy)
    return StrainField(
        e11=0.5 * wx**2 - z * wxx,
        e22=0.5 * wy**2 - z * wyy,
        e12=0.5 * (wx * wy - 2.0 * z * wxy),
    )


def plate_stresses(strains, E, nu):
    """Plane-stress constitutive map; the shear entry is ``E (1-nu)/(1-nu^2)`` on ``e12``."""
    c = E / (1.0 - nu**2)
    e11, e22, e12 = (np.asarray(s, dtype=float) for s in strains)
    return StressField(c * (e11 + nu * e22), c * (nu * e11 + e22), c * (1.0 - nu) * e12)


def moments(model, w0):
    """Moment resultants from the bending stress integrated through the thickness."""
    D = model.D
    wxx, wyy, wxy = curvatures(np.asarray(w0, dtype=float), model.dx, model.dy)
    return Moments(-D * (wxx + model.nu * wyy), -D * (wyy + model.nu * wxx),
                   -D * (1.0 - model.nu) * wxy)


class _Grid:
    """Index bookkeeping for the ghost-padded grid."""

    pad = 2

    def __init__(self, nx, ny):
        self.nx, self.ny = nx, ny
        self.NY = ny + 2 * self.pad
        self.N = (nx + 2 * self.pad) * self.NY

    def idx(self, i, j):
        return (i + self.pad) * self.NY + (j + self.pad)

    def points(self):
        p = self.pad
        for i in range(-p, self.nx + p):
            for j in range(-p, self.ny + p):
                yield i, j


def _assemble(model, q):
    nx, ny, dx, dy, D = model.nx, model.ny, model.dx, model.dy, model.D
    G = _Grid(nx, ny)
    clamped = model.clamped_edges
    nu = model.nu
    classical = model.free_edge == "classical"
    rows, cols, vals = [], [], []
    rhs = np.zeros(G.N)
    eq = [0]

    def add(coeffs, value=0.0):
        r = eq[0]
        for (i, j), c in coeffs.items():
            rows.append(r)
            cols.append(G.idx(i, j))
            vals.append(c)
        rhs[r] = value
        eq[0] += 1

    def lap(i, j, scale=1.0):
        return {
            (i - 1, j): scale / dx**2, (i + 1, j): scale / dx**2,
            (i, j - 1): scale / dy**2, (i, j + 1): scale / dy**2,
            (i, j): -2.0 * scale * (1.0 / dx**2 + 1.0 / dy**2),
        }

    def merge(*dicts):
        out = {}
        for d in dicts:
            for key, c in d.items():
                out[key] = out.get(key, 0.0) + c
        return out

    def twist(bi, bj):
        return {(bi + 1, bj + 1): 1.0, (bi - 1, bj - 1): 1.0,
                (bi + 1, bj - 1): -1.0, (bi - 1, bj + 1): -1.0}

    def normal_moment(bi, bj, normal):
        # w_nn + nu w_tt
        dn, dt = (dx, dy) if normal[0] else (dy, dx)
        n_ = (1, 0) if normal[0] else (0, 1)
        t_ = (0, 1) if normal[0] else (1, 0)
        return {
            (bi - n_[0], bj - n_[1]): 1.0 / dn**2, (bi + n_[0], bj + n_[1]): 1.0 / dn**2,
            (bi - t_[0], bj - t_[1]): nu / dt**2, (bi + t_[0], bj + t_[1]): nu / dt**2,
            (bi, bj): -2.0 / dn**2 - 2.0 * nu / dt**2,
        }

    def edge_shear(bi, bj, normal):
        # w_nnn + (2 - nu) w_ntt
        dn, dt = (dx, dy) if normal[0] else (dy, dx)
        n_ = (1, 0) if normal[0] else (0, 1)
        t_ = (0, 1) if normal[0] else (1, 0)
        c = {}

        def put(k, m, v):
            key = (bi + k * n_[0] + m * t_[0], bj + k * n_[1] + m * t_[1])
            c[key] = c.get(key, 0.0) + v

        for k, v in ((2, 1.0), (1, -2.0), (-1, 2.0), (-2, -1.0)):
            put(k, 0, v / (2.0 * dn**3))
        f = (2.0 - nu) / (2.0 * dn * dt**2)
        for k in (1, -1):
            put(k, 1, k * f)
            put(k, 0, -2.0 * k * f)
            put(k, -1, k * f)
        return c

    def biharmonic(i, j):
        c = {}
        for key, v in (((i - 2, j), 1), ((i - 1, j), -4), ((i, j), 6), ((i + 1, j), -4), ((i + 2, j), 1)):
            c[key] = c.get(key, 0.0) + D * v / dx**4
        for key, v in (((i, j - 2), 1), ((i, j - 1), -4), ((i, j), 6), ((i, j + 1), -4), ((i, j + 2), 1)):
            c[key] = c.get(key, 0.0) + D * v / dy**4
        s = 2.0 * D / (dx**2 * dy**2)
        for key, v in (((i + 1, j + 1), 1), ((i + 1, j - 1), 1), ((i - 1, j + 1), 1), ((i - 1, j - 1), 1),
                       ((i + 1, j), -2), ((i - 1, j), -2), ((i, j + 1), -2), ((i, j - 1), -2), ((i, j), 4)):
            c[key] = c.get(key, 0.0) + s * v
        c[(i, j)] += model.k
        return c

    def on_clamped(i, j):
        return ((i == 0 and "left" in clamped) or (i == nx - 1 and "right" in clamped)
                or (j == 0 and "bottom" in clamped) or (j == ny - 1 and "top" in clamped))

    def side(i, n):
        return -1 if i < 0 else (1 if i > n - 1 else 0)

    x_edge = {-1: "left", 1: "right"}
    y_edge = {-1: "bottom", 1: "top"}

    for i, j in G.points():
        ox, oy = side(i, nx), side(j, ny)
        if ox == 0 and oy == 0:
            if on_clamped(i, j):
                add({(i, j): 1.0})
            else:
                add(biharmonic(i, j), -q[i, j])
            continue
        if ox and oy:
            if x_edge[ox] in clamped:
                bi = 0 if ox < 0 else nx - 1
                add({(i, j): 1.0, (2 * bi - i, j): -1.0})
            elif y_edge[oy] in clamped:
                bj = 0 if oy < 0 else ny - 1
                add({(i, j): 1.0, (i, 2 * bj - j): -1.0})
            else:
                bi, bj = (0 if ox < 0 else nx - 1), (0 if oy < 0 else ny - 1)
                if classical and abs(i - bi) == 1 and abs(j - bj) == 1:
                    add(twist(bi, bj))
                else:
                    add({(i, j): 1.0, (i - ox, j): -1.0, (i, j - oy): -1.0, (i - ox, j - oy): 1.0})
            continue
        # ghost beyond exactly one edge
        if ox:
            edge, bi, bj, layer = x_edge[ox], (0 if ox < 0 else nx - 1), j, abs(i - (0 if ox < 0 else nx - 1))
            normal = (ox, 0)
        else:
            edge, bi, bj, layer = y_edge[oy], i, (0 if oy < 0 else ny - 1), abs(j - (0 if oy < 0 else ny - 1))
            normal = (0, oy)
        if edge in clamped:
            add({(i, j): 1.0, (bi - normal[0] * layer, bj - normal[1] * layer): -1.0})
            continue
        if on_clamped(bi, bj):
            add({(i, j): 1.0})
            continue
        corner_second = oy != 0 and (
            (bi == 0 and "left" not in clamped) or (bi == nx - 1 and "right" not in clamped)
        )
        if layer == 1:
            if corner_second and not classical:
                # lap(w)=0 at this corner is already owned by the x-ghost
                add(twist(bi, bj))
            elif classical:
                add(normal_moment(bi, bj, normal))
            else:
                add(lap(bi, bj))
        elif classical:
            add(edge_shear(bi, bj, normal))
        else:
            g1 = (bi + normal[0], bj + normal[1])
            i1 = (bi - normal[0], bj - normal[1])
            add(merge(lap(*g1), lap(*i1, scale=-1.0)))
    A = sparse.csr_matrix((vals, (rows, cols)), shape=(G.N, G.N))
    return A, rhs, G


def solve_plate_static(model, q):
    """Deflection, moments and top-surface stresses under the load grid ``q`` [N/m^2]."""
    q = np.asarray(q, dtype=float)
    if q.ndim == 0:
        q = np.full((model.nx, model.ny), float(q))
    if q.shape != (model.nx, model.ny):
        raise InvalidArgumentError(f"load grid must be {(model.nx, model.ny)}, got {q.shape}")
    free = set(EDGES) - model.clamped_edges
    if free and model.free_edge == "laplacian":
        raise NumericalFailureError(
            f"free edges {sorted(free)} with lap(w0)=0 and d lap(w0)/dn=0 leave the plate "
            "problem without a unique solution; clamp every edge or pass free_edge='classical'"
        )
    A, rhs, G = _assemble(model, q)
    try:
        lu = splinalg.splu(A.tocsc())
        sol = lu.solve(rhs)
    except RuntimeError as exc:
        raise NumericalFailureError(f"plate system is singular: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise NumericalFailureError("plate solve produced non-finite values")
    full = sol.reshape(model.nx + 2 * G.pad, G.NY)
    w0 = full[G.pad : G.pad + model.nx, G.pad : G.pad + model.ny].copy()
    for edge, sl in (("left", np.s_[0, :]), ("right", np.s_[-1, :]),
                     ("bottom", np.s_[:, 0]), ("top", np.s_[:, -1])):
        if edge in model.clamped_edges:
            w0[sl] = 0.0
    M = moments(model, w0)
    top = plate_stresses(plate_strains(model, w0, model.h), model.E, model.nu)
    return PlateSolution(model, w0, M.M11, M.M22, M.M12, top)


def free_edge_laplacian(solution):
    """Largest one-sided ``|lap(w0)|`` on the free edges, relative to the domain maximum.

    Only interior points enter the one-sided differences, so this measures how
    well the ghost-imposed condition carries over to the grid function.
    """
    m = solution.model
    lap_w = laplacian(solution.w0, m.dx, m.dy)
    scale = float(np.max(np.abs(lap_w)))
    if scale == 0.0:
        return 0.0
    vals = []
    for edge, sl in (("left", np.s_[0, 1:-1]), ("right", np.s_[-1, 1:-1]),
                     ("bottom", np.s_[1:-1, 0]), ("top", np.s_[1:-1, -1])):
        if edge not in m.clamped_edges:
            vals.append(np.max(np.abs(lap_w[sl])))
    return float(max(vals) / scale) if vals else 0.0


def free_edge_moment(solution):
    """Largest ``|w_nn + nu w_tt|`` on the free edges, relative to the domain max of ``|w_xx|, |w_yy|``.

    Only the middle half of each edge enters, away from corner singularities;
    the edge values use one-sided second differences.
    """
    m = solution.model
    wxx, wyy, _ = curvatures(solution.w0, m.dx, m.dy)
    scale = float(max(np.max(np.abs(wxx)), np.max(np.abs(wyy))))
    if scale == 0.0:
        return 0.0
    mx = wxx + m.nu * wyy
    my = wyy + m.nu * wxx
    ix = np.s_[m.nx // 4 : m.nx - m.nx // 4]
    iy = np.s_[m.ny // 4 : m.ny - m.ny // 4]
    vals = []
    for edge, field_, sl in (("left", mx, np.s_[0, iy]), ("right", mx, np.s_[-1, iy]),
                             ("bottom", my, np.s_[ix, 0]), ("top", my, np.s_[ix, -1])):
        if edge not in m.clamped_edges:
            vals.append(np.max(np.abs(field_[sl])))
    return float(max(vals) / scale) if vals else 0.0
