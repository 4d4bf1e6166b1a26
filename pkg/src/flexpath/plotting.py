"""PNG figures that accompany the CSV/JSON reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 100,
    "savefig.bbox": "tight",
}
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _size(width=5.5):
    return (width, width * GOLDEN)


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # no Software tag, so reruns with the same matplotlib give the same bytes
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_simulation(sim, path, sigma_max=None):
    """Tip deflection and peak |stress| against time."""
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=_size())
        ax1.plot(sim.times, sim.tip * 1e3, lw=1.0, color="k")
        ax1.set_ylabel("tip w [mm]")
        peak = np.max(np.abs(sim.sigma), axis=1)
        ax2.plot(sim.times, peak / 1e6, lw=1.0, color="C3")
        if sigma_max is not None:
            ax2.axhline(sigma_max / 1e6, ls="--", lw=0.8, color="0.4", label="limit")
            ax2.legend(frameon=False)
        ax2.set_ylabel(r"max$_x|\sigma|$ [MPa]")
        ax2.set_xlabel("t [s]")
        return _save(fig, path)


def plot_static(x, w, sigma, path):
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=_size())
        ax1.plot(x, w * 1e3, color="k", lw=1.0)
        ax1.set_ylabel("w [mm]")
        ax2.plot(x, sigma / 1e6, color="C0", lw=1.0)
        ax2.set_ylabel(r"$\sigma$ [MPa]")
        ax2.set_xlabel("x [m]")
        return _save(fig, path)


def plot_modes(modal, path):
    """Normalized mode shapes on the node grid."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=_size())
        xs = np.asarray(modal.x) / modal.x[-1]
        for k, (beta, shape) in enumerate(zip(modal.betas, modal.mode_shapes), start=1):
            ax.plot(xs, shape, lw=1.0, label=rf"$n={k}$, $\beta={beta:.4f}$")
        ax.axhline(0.0, color="0.7", lw=0.5)
        ax.set_xlabel("x / L")
        ax.set_ylabel("w / w(L)")
        ax.legend(frameon=False, ncol=2)
        return _save(fig, path)


def plot_plate(solution, path, field="w0"):
    model = solution.model
    X, Y = model.grid()
    data = getattr(solution, field)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 4.5 * model.b / model.a + 0.4))
        cs = ax.contourf(X, Y, data, levels=21, cmap="viridis")
        fig.colorbar(cs, ax=ax, shrink=0.85, label=field)
        ax.set_aspect("equal")
        ax.set_xlabel("x [m]")
        ax.set_ylabel("y [m]")
        return _save(fig, path)


def plot_scan(scan, path, T_star=None):
    """Pass/fail of every evaluated duration in a minimum-time search."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=_size())
        T = np.array([p["T"] for p in scan])
        s = np.array([p["peak_stress"] for p in scan])
        ok = np.array([p["pass"] for p in scan], dtype=bool)
        ax.loglog(T[ok], s[ok], "o", ms=4, color="C2", label="pass")
        ax.loglog(T[~ok], s[~ok], "x", ms=5, color="C3", label="fail")
        if T_star is not None:
            ax.axvline(T_star, ls="--", lw=0.8, color="0.3")
        ax.set_xlabel("T [s]")
        ax.set_ylabel(r"peak $|\sigma|$ [Pa]")
        ax.legend(frameon=False)
        return _save(fig, path)
