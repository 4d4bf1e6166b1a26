"""Command-line front end.

    flexpath <subcommand> --config run.json [--out DIR] [--quiet] [--no-figures]

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 safety check
failed, 4 no feasible duration, 5 numerical failure.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import io
from .beam import modal_analysis, simulate, solve_static_state, state_stress
from .config import config_from_dict, parse_config, with_override
from .errors import ConfigError, FlexpathError, InfeasibleError, NumericalFailureError
from .kinematics import beam_load, nondimensional_groups
from .plate import solve_plate_static
from .safety import evaluate, min_time_search, rest_to_rest_family, von_mises
from .trajectory import KinematicSample

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_UNSAFE, EXIT_INFEASIBLE, EXIT_NUMERICAL = range(6)
SUBCOMMANDS = ("simulate", "static", "modal", "plate", "check", "mintime", "sweep")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class Run:
    """Shared state of one CLI invocation."""

    def __init__(self, cfg, out, quiet=False, figures=True):
        self.cfg = cfg
        self.out = Path(out)
        self.quiet = quiet
        self.figures = figures

    def say(self, msg):
        if not self.quiet:
            print(msg)

    def trajectory(self):
        return self.cfg.trajectory.build()

    def simulate(self):
        c = self.cfg
        gamma = c.sim.gamma
        beta = 0.25 * (gamma + 0.5) ** 2
        return simulate(c.beam_model(), self.trajectory(), c.sim.dt, c.gravity,
                        c.sim.output_stride, beta, gamma, c.sim.initial)

    def figure(self, fn, *args, **kw):
        if self.figures:
            from . import plotting

            path = getattr(plotting, fn)(*args, **kw)
            self.say(f"wrote {path}")


def _require(cfg, section):
    if getattr(cfg, section) in (None, {}):
        raise ConfigError(f"{section}: this subcommand needs a '{section}' section")


def _sim_summary(run, sim):
    cfg, model = run.cfg, run.cfg.beam_model()
    s, sx, st = sim.peak_stress()
    tip, tip_t = sim.peak_tip()
    out = {
        "backend": model.backend.value,
        "n_nodes": model.n_nodes,
        "n_records": int(len(sim.times)),
        "T": cfg.trajectory.T,
        "peak_stress": {"value": s, "x": sx, "t": st},
        "peak_tip": {"value": tip, "t": tip_t},
        "final_tip": float(sim.tip[-1]),
        "energy_drift": sim.energy_drift(),
        "stress_ratio_to_yield": s / model.sigma_yield,
    }
    if cfg.scales is not None:
        t = cfg.trajectory
        out["dimensionless"] = nondimensional_groups(
            model.E, model.I, model.rho, model.L, t.T, cfg.scales["W"], t.R, cfg.gravity
        ).as_dict()
    return out


def cmd_simulate(run):
    sim = run.simulate()
    header, cols = io.simulation_columns(sim)
    run.say(f"wrote {io.write_csv(run.out / 'simulation.csv', header, cols)}")
    summary = _sim_summary(run, sim)
    run.say(f"wrote {io.write_json(run.out / 'simulation_summary.json', summary)}")
    limit = run.cfg.limits.sigma_max if run.cfg.limits else None
    run.figure("plot_simulation", sim, run.out / "simulation.png", sigma_max=limit)
    return EXIT_OK


def cmd_static(run, theta=None):
    cfg, model = run.cfg, run.cfg.beam_model()
    th = cfg.trajectory.theta1 if theta is None else theta
    rest = KinematicSample(th, 0.0, 0.0, 0.0)
    q = beam_load(model.x, np.zeros(model.n_nodes), rest, KinematicSample(0.0, 0.0, 0.0, 0.0),
                  model.rho, cfg.gravity).q
    st = solve_static_state(model, q)
    w, sig = st.w, state_stress(model, st)
    run.say(f"wrote {io.write_csv(run.out / 'static.csv', ['x', 'w', 'sigma'], [model.x, w, sig])}")
    run.figure("plot_static", model.x, w, sig, run.out / "static.png")
    return EXIT_OK


def cmd_modal(run):
    model = run.cfg.beam_model()
    res = modal_analysis(model, run.cfg.n_modes, T=run.cfg.trajectory.T)
    data = dict(res.as_dict(), backend=model.backend.value, n_nodes=model.n_nodes)
    run.say(f"wrote {io.write_json(run.out / 'modal.json', data)}")
    header = ["x"] + [f"mode_{k}" for k in range(1, len(res.betas) + 1)]
    io.write_csv(run.out / "modes.csv", header, [res.x, *res.mode_shapes])
    run.figure("plot_modes", res, run.out / "modes.png")
    return EXIT_OK


def _plate_solution(cfg):
    spec = cfg.plate
    m = spec.model
    q = m.self_weight(cfg.gravity) if spec.q is None else spec.q
    return solve_plate_static(m, np.full((m.nx, m.ny), q)), q


def cmd_plate(run):
    cfg = run.cfg
    _require(cfg, "plate")
    sol, q = _plate_solution(cfg)
    m = sol.model
    X, Y = m.grid()
    vm = von_mises(*sol.sigma_top, classical=cfg.classical_von_mises)
    cols = [X.ravel(), Y.ravel(), sol.w0.ravel(), sol.M11.ravel(), sol.M22.ravel(),
            sol.M12.ravel(), vm.ravel()]
    header = ["x", "y", "w0", "M11", "M22", "M12", "sigma_vm_top"]
    run.say(f"wrote {io.write_csv(run.out / 'plate.csv', header, cols)}")
    k = int(np.argmax(np.abs(sol.w0)))
    i, j = np.unravel_index(k, sol.w0.shape)
    side = {
        "D": m.D,
        "q": q,
        "max_abs_w0": float(abs(sol.w0[i, j])),
        "max_abs_w0_at": [float(X[i, j]), float(Y[i, j])],
        "coefficient": float(abs(sol.w0[i, j]) * m.D / (abs(q) * m.a**4)) if q else 0.0,
        "peak_von_mises_top": float(np.max(vm)),
        "von_mises": "classical" if cfg.classical_von_mises else "uncoupled",
        "clamped_edges": sorted(m.clamped_edges),
        "free_edge": m.free_edge,
        "grid": [m.nx, m.ny],
    }
    run.say(f"wrote {io.write_json(run.out / 'plate.json', side)}")
    run.figure("plot_plate", sol, run.out / "plate.png")
    return EXIT_OK


def cmd_check(run):
    cfg = run.cfg
    _require(cfg, "limits")
    model = cfg.beam_model()
    traj = run.trajectory()
    sim = run.simulate()
    modal = modal_analysis(model, cfg.n_modes)
    plate = _plate_solution(cfg)[0].sigma_top if cfg.plate is not None else None
    rep = evaluate(sim, traj, modal, cfg.limits, plate_stresses=plate,
                   classical=cfg.classical_von_mises)
    run.say(f"wrote {io.write_json(run.out / 'report.json', rep.to_dict())}")
    run.say("PASS" if rep.passed else "FAIL")
    return EXIT_OK if rep.passed else EXIT_UNSAFE


def _workers():
    raw = os.environ.get("FLEXPATH_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"FLEXPATH_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"FLEXPATH_THREADS must be a positive integer, got {raw!r}")
    return n


def cmd_mintime(run):
    cfg = run.cfg
    _require(cfg, "limits")
    _require(cfg, "search")
    t, s = cfg.trajectory, cfg.search
    if t.generator is None:
        raise ConfigError("trajectory: mintime scales a generator over T; segment lists have no such family")
    family = rest_to_rest_family(t.generator, t.theta0, t.theta1, t.R)
    gamma = cfg.sim.gamma
    if gamma != 0.5:
        run.say("note: mintime always integrates with average acceleration")
    try:
        res = min_time_search(family, cfg.beam_model(), cfg.limits, (s.T_lo, s.T_hi),
                              dt=cfg.sim.dt, g=cfg.gravity, n_modes=cfg.n_modes,
                              workers=min(_workers(), s.n_scan), n_scan=s.n_scan, rtol=s.rtol)
    except InfeasibleError as exc:
        io.write_json(run.out / "mintime.json",
                      {"T_star": None, "feasible": False, "scan": exc.scan, "message": str(exc)})
        run.figure("plot_scan", exc.scan, run.out / "mintime.png")
        raise
    data = dict(res.as_dict(), feasible=True)
    run.say(f"wrote {io.write_json(run.out / 'mintime.json', data)}")
    run.say(f"T_star = {io.fmt(res.T_star)} s")
    run.figure("plot_scan", data["scan"], run.out / "mintime.png", T_star=res.T_star)
    return EXIT_OK


def _sweep_one(raw, overrides):
    for key, value in overrides:
        raw = with_override(raw, key, value)
    cfg = config_from_dict(raw)
    run = Run(cfg, ".", quiet=True, figures=False)
    sim = run.simulate()
    out = {"overrides": {k: v for k, v in overrides}, "summary": _sim_summary(run, sim)}
    if cfg.limits is not None:
        model = cfg.beam_model()
        rep = evaluate(sim, run.trajectory(), modal_analysis(model, cfg.n_modes), cfg.limits)
        out["pass"] = rep.passed
        out["margins"] = rep.to_dict()["margins"]
    return out


def cmd_sweep(run, raw):
    _require(run.cfg, "sweep")
    grid = run.cfg.sweep
    keys = sorted(grid)
    combos = [list(zip(keys, vals)) for vals in itertools.product(*(grid[k] for k in keys))]
    workers = max(1, min(_workers(), len(combos)))
    base = {k: v for k, v in raw.items() if k != "sweep"}
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: _sweep_one(base, c), combos))
    else:
        results = [_sweep_one(base, c) for c in combos]
    width = max(3, len(str(len(combos) - 1)))
    for k, res in enumerate(results):
        io.write_json(run.out / "sweep" / f"run_{k:0{width}d}.json", dict(res, index=k))
    run.say(f"wrote {io.write_json(run.out / 'sweep.json', {'keys': keys, 'runs': results})}")
    return EXIT_OK


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--out", default="out", help="output directory (default: ./out)")
    common.add_argument("--quiet", action="store_true", help="only report errors")
    common.add_argument("--no-figures", action="store_true", help="skip the PNG figures")
    parser = _Parser(
        prog="flexpath",
        description="Deformation analysis and safe-duration search for a flexible piece "
                    "carried by a rotating arm.",
        epilog="exit codes: 0 ok, 1 usage, 2 config, 3 unsafe, 4 infeasible, 5 numerical failure",
    )
    sub = parser.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
    sub.required = True
    helps = {
        "simulate": "deflection and stress history along the trajectory",
        "static": "static sag at rest in a given pose",
        "modal": "characteristic roots, natural rates and mode shapes",
        "plate": "quasi-static plate deflection, moments and von Mises stress",
        "check": "safety report; exit 3 when a limit is exceeded",
        "mintime": "shortest safe duration; exit 4 when none is found",
        "sweep": "simulate over a parameter grid",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "static":
            p.add_argument("--theta", type=float, default=None,
                           help="pose angle [rad] (default: trajectory.theta1)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        cfg = parse_config(args.config)
        run = Run(cfg, args.out, args.quiet, not args.no_figures)
        if args.command == "static":
            return cmd_static(run, args.theta)
        if args.command == "sweep":
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
            return cmd_sweep(run, raw)
        return globals()[f"cmd_{args.command}"](run)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FlexpathError as exc:
        # every input comes from the config, so a rejected argument is a config problem
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
