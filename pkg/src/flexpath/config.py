"""Run configuration: strict JSON parsing, validation and serialization.

Unknown keys are rejected (with a close-match suggestion) and every error
names the offending entry as a dotted path such as ``beam.L``.
"""
from __future__ import annotations

import difflib
import json
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .beam import Backend, BeamModel
from .errors import ConfigError, FlexpathError
from .plate import EDGES, FREE_EDGE_MODES, PlateModel
from .safety import SafetyLimits
from .trajectory import GENERATORS, PiecewisePolynomial, PolynomialSegment, Trajectory, rest_to_rest

DEFAULT_G = 9.81
_MISSING = object()


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _positive(v):
    return _is_number(v) and v > 0


def _nonneg(v):
    return _is_number(v) and v >= 0


def _integer(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _check_keys(obj, allowed, path):
    if not isinstance(obj, dict):
        raise ConfigError(f"{path or 'config'}: expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            where = f"{path}.{key}" if path else key
            close = difflib.get_close_matches(key, list(allowed), n=1)
            hint = f"; did you mean {close[0]!r}?" if close else ""
            raise ConfigError(f"unknown key {where!r}{hint}")


def _get(obj, key, path, check, what, default=_MISSING):
    where = f"{path}.{key}"
    if key not in obj:
        if default is _MISSING:
            raise ConfigError(f"{where}: required {what} is missing")
        return default
    v = obj[key]
    if not check(v):
        raise ConfigError(f"{where}: expected {what}, got {v!r}")
    return v


@dataclass(frozen=True)
class TrajectorySpec:
    """Either a generator with its endpoints or explicit polynomial segments.

    In the segment form ``generator`` is None and the endpoint fields are
    read off the assembled paths.  Segments are ``(coefficients, duration)``
    pairs with ascending-degree coefficients in the segment's local time.
    """

    generator: str | None
    theta0: float
    theta1: float
    R: float
    T: float
    theta_segments: tuple | None = None
    r_segments: tuple | None = None

    def build(self):
        if self.generator is not None:
            return rest_to_rest(self.generator, self.theta0, self.theta1, self.R, self.T)
        return _segment_trajectory(self.theta_segments, self.r_segments)


def _segment_trajectory(theta_segments, r_segments):
    theta = PiecewisePolynomial(tuple(PolynomialSegment(c, d) for c, d in theta_segments))
    if r_segments is None:
        r = PolynomialSegment((0.0,), theta.duration)
    else:
        r = PiecewisePolynomial(tuple(PolynomialSegment(c, d) for c, d in r_segments))
    return Trajectory(theta, r, theta.duration)


@dataclass(frozen=True)
class SimSpec:
    dt: float
    output_stride: int = 1
    backend: str | None = None
    gamma: float = 0.5
    initial: str = "rest"


@dataclass(frozen=True)
class PlateSpec:
    model: PlateModel
    q: float | None = None  # uniform load [N/m^2]; None means self weight


@dataclass(frozen=True)
class SearchSpec:
    T_lo: float
    T_hi: float
    n_scan: int = 12
    rtol: float = 1e-2


@dataclass(frozen=True)
class RunConfig:
    beam: BeamModel
    trajectory: TrajectorySpec
    sim: SimSpec
    limits: SafetyLimits | None = None
    plate: PlateSpec | None = None
    gravity: float = DEFAULT_G
    scales: dict | None = None
    n_modes: int = 3
    classical_von_mises: bool = False
    search: SearchSpec | None = None
    sweep: dict = field(default_factory=dict)

    def beam_model(self):
        """The beam model with the ``sim.backend`` override applied."""
        if self.sim.backend is None:
            return self.beam
        return replace(self.beam, backend=Backend.parse(self.sim.backend))

    def to_dict(self):
        b = self.beam
        out = {
            "beam": {"E": b.E, "I": b.I, "rho": b.rho, "L": b.L, "h": b.h,
                     "sigma_yield": b.sigma_yield, "n_nodes": b.n_nodes, "backend": b.backend.value},
            "trajectory": _trajectory_dict(self.trajectory),
            "sim": {k: v for k, v in ((f.name, getattr(self.sim, f.name)) for f in fields(SimSpec))
                    if v is not None},
            "gravity": self.gravity,
            "modal": {"n_modes": self.n_modes},
        }
        if self.limits is not None:
            out["limits"] = dict(self.limits.as_dict(),
                                 von_mises="classical" if self.classical_von_mises else "uncoupled")
        if self.plate is not None:
            p = self.plate.model
            out["plate"] = {"E": p.E, "nu": p.nu, "h": p.h, "rho": p.rho, "a": p.a, "b": p.b,
                            "nx": p.nx, "ny": p.ny, "clamped_edges": sorted(p.clamped_edges),
                            "k": p.k, "free_edge": p.free_edge}
            if self.plate.q is not None:
                out["plate"]["q"] = self.plate.q
        if self.scales is not None:
            out["scales"] = dict(self.scales)
        if self.search is not None:
            out["search"] = {f.name: getattr(self.search, f.name) for f in fields(SearchSpec)}
        if self.sweep:
            out["sweep"] = {k: list(v) for k, v in self.sweep.items()}
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _trajectory_dict(t):
    if t.generator is None:
        out = {"theta_segments": [{"coefficients": list(c), "duration": d} for c, d in t.theta_segments]}
        if t.r_segments is not None:
            out["r_segments"] = [{"coefficients": list(c), "duration": d} for c, d in t.r_segments]
        return out
    return {"generator": t.generator, "theta0": t.theta0, "theta1": t.theta1, "R": t.R, "T": t.T}


SECTIONS = ("beam", "trajectory", "sim", "limits", "plate", "gravity", "scales", "modal",
            "search", "sweep")


def _construct(cls, path, **kw):
    try:
        return cls(**kw)
    except FlexpathError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_beam(obj):
    p = "beam"
    _check_keys(obj, ("E", "I", "rho", "L", "h", "sigma_yield", "n_nodes", "backend"), p)
    kw = {k: _get(obj, k, p, _positive, "a positive number")
          for k in ("E", "I", "rho", "L", "h", "sigma_yield")}
    kw["n_nodes"] = _get(obj, "n_nodes", p, lambda v: _integer(v) and v >= 5, "an integer >= 5", 101)
    backend = _get(obj, "backend", p, lambda v: isinstance(v, str), "'fd' or 'fem'", "fd")
    try:
        kw["backend"] = Backend.parse(backend)
    except FlexpathError as exc:
        raise ConfigError(f"beam.backend: {exc}") from None
    return _construct(BeamModel, p, **kw)


def _parse_segments(items, path):
    if not (isinstance(items, list) and items):
        raise ConfigError(f"{path}: expected a non-empty list of segments")
    out = []
    for k, seg in enumerate(items):
        sp = f"{path}[{k}]"
        _check_keys(seg, ("coefficients", "duration"), sp)
        coeffs = _get(seg, "coefficients", sp,
                      lambda v: isinstance(v, list) and v and all(_is_number(c) for c in v),
                      "a non-empty list of numbers")
        dur = _get(seg, "duration", sp, _positive, "a positive duration")
        out.append((tuple(float(c) for c in coeffs), float(dur)))
    return tuple(out)


def _parse_trajectory(obj):
    p = "trajectory"
    if isinstance(obj, dict) and "theta_segments" in obj:
        _check_keys(obj, ("theta_segments", "r_segments"), p)
        th = _parse_segments(obj["theta_segments"], f"{p}.theta_segments")
        r = _parse_segments(obj["r_segments"], f"{p}.r_segments") if "r_segments" in obj else None
        try:
            traj = _segment_trajectory(th, r)
        except FlexpathError as exc:
            raise ConfigError(f"{p}: {exc}") from None
        return TrajectorySpec(None, traj.theta0, traj.theta1, traj.R, traj.total_time, th, r)
    _check_keys(obj, ("generator", "theta0", "theta1", "R", "T", "theta_segments", "r_segments"), p)
    if "r_segments" in obj:
        raise ConfigError(f"{p}.r_segments: only allowed together with theta_segments")
    gen = _get(obj, "generator", p, lambda v: v in GENERATORS, f"one of {sorted(GENERATORS)}",
               "quintic")
    return TrajectorySpec(
        generator=gen,
        theta0=float(_get(obj, "theta0", p, _is_number, "a number")),
        theta1=float(_get(obj, "theta1", p, _is_number, "a number")),
        R=float(_get(obj, "R", p, _nonneg, "a non-negative number", 0.0)),
        T=float(_get(obj, "T", p, _positive, "a positive duration")),
    )


def _parse_sim(obj):
    p = "sim"
    _check_keys(obj, ("dt", "output_stride", "backend", "gamma", "initial"), p)
    backend = _get(obj, "backend", p, lambda v: isinstance(v, str), "'fd' or 'fem'", None)
    if backend is not None:
        try:
            backend = Backend.parse(backend).value
        except FlexpathError as exc:
            raise ConfigError(f"sim.backend: {exc}") from None
    return SimSpec(
        dt=float(_get(obj, "dt", p, _positive, "a positive time step")),
        output_stride=_get(obj, "output_stride", p, lambda v: _integer(v) and v >= 1,
                           "an integer >= 1", 1),
        backend=backend,
        gamma=float(_get(obj, "gamma", p, lambda v: _is_number(v) and v >= 0.5,
                         "a number >= 0.5", 0.5)),
        initial=_get(obj, "initial", p, lambda v: v in ("rest", "static"), "'rest' or 'static'",
                     "rest"),
    )


def _parse_limits(obj):
    p = "limits"
    _check_keys(obj, ("sigma_max", "jerk_max_theta", "jerk_max_r", "resonance_gap_min",
                      "von_mises"), p)
    kw = {k: float(_get(obj, k, p, _positive, "a positive number"))
          for k in ("sigma_max", "jerk_max_theta", "jerk_max_r")}
    kw["resonance_gap_min"] = float(_get(obj, "resonance_gap_min", p, _positive,
                                         "a positive number", 0.1))
    vm = _get(obj, "von_mises", p, lambda v: v in ("uncoupled", "classical"),
              "'uncoupled' or 'classical'", "uncoupled")
    return _construct(SafetyLimits, p, **kw), vm == "classical"


def _parse_plate(obj):
    p = "plate"
    _check_keys(obj, ("E", "nu", "h", "rho", "a", "b", "nx", "ny", "clamped_edges", "k",
                      "free_edge", "q"), p)
    kw = {k: float(_get(obj, k, p, _positive, "a positive number")) for k in ("E", "h", "a", "b")}
    kw["nu"] = float(_get(obj, "nu", p, lambda v: _is_number(v) and 0 < v < 0.5,
                          "a number in (0, 0.5)"))
    kw["rho"] = float(_get(obj, "rho", p, _nonneg, "a non-negative number"))
    for k in ("nx", "ny"):
        kw[k] = _get(obj, k, p, lambda v: _integer(v) and v >= 9, "an integer >= 9", 65)
    edges = _get(obj, "clamped_edges", p,
                 lambda v: isinstance(v, list) and v and all(e in EDGES for e in v),
                 f"a non-empty list drawn from {list(EDGES)}", list(EDGES))
    kw["clamped_edges"] = frozenset(edges)
    kw["k"] = float(_get(obj, "k", p, _nonneg, "a non-negative number", 0.0))
    kw["free_edge"] = _get(obj, "free_edge", p, lambda v: v in FREE_EDGE_MODES,
                           f"one of {list(FREE_EDGE_MODES)}", "laplacian")
    q = _get(obj, "q", p, _is_number, "a number", None)
    return PlateSpec(_construct(PlateModel, p, **kw), None if q is None else float(q))


def _parse_search(obj):
    p = "search"
    _check_keys(obj, ("T_lo", "T_hi", "n_scan", "rtol"), p)
    lo = float(_get(obj, "T_lo", p, _positive, "a positive duration"))
    hi = float(_get(obj, "T_hi", p, _positive, "a positive duration"))
    if not lo < hi:
        raise ConfigError(f"search.T_hi: must exceed T_lo ({lo!r}), got {hi!r}")
    return SearchSpec(
        lo, hi,
        n_scan=_get(obj, "n_scan", p, lambda v: _integer(v) and v >= 2, "an integer >= 2", 12),
        rtol=float(_get(obj, "rtol", p, lambda v: _is_number(v) and 0 < v < 1,
                        "a number in (0, 1)", 1e-2)),
    )


SWEEPABLE = {
    "beam": ("E", "I", "rho", "L", "h", "sigma_yield", "n_nodes", "backend"),
    "trajectory": ("generator", "theta0", "theta1", "R", "T"),
    "sim": ("dt", "output_stride", "backend", "gamma", "initial"),
    "limits": ("sigma_max", "jerk_max_theta", "jerk_max_r", "resonance_gap_min"),
}


def _parse_sweep(obj):
    if not isinstance(obj, dict):
        raise ConfigError("sweep: expected an object mapping 'section.key' to a list of values")
    allowed = [f"{s}.{k}" for s, keys in SWEEPABLE.items() for k in keys]
    _check_keys(obj, allowed, "sweep")
    out = {}
    for key, values in obj.items():
        if not (isinstance(values, list) and values):
            raise ConfigError(f"sweep.{key}: expected a non-empty list of values")
        out[key] = list(values)
    return out


def config_from_dict(raw):
    """Validate a decoded JSON object into a :class:`RunConfig`."""
    _check_keys(raw, SECTIONS, "")
    for req in ("beam", "trajectory", "sim"):
        if req not in raw:
            raise ConfigError(f"{req}: required section is missing")
    limits, classical = (None, False)
    if "limits" in raw:
        limits, classical = _parse_limits(raw["limits"])
    g = raw.get("gravity", DEFAULT_G)
    if not _nonneg(g):
        raise ConfigError(f"gravity: expected a non-negative number, got {g!r}")
    scales = None
    if "scales" in raw:
        _check_keys(raw["scales"], ("W",), "scales")
        scales = {"W": float(_get(raw["scales"], "W", "scales", _positive, "a positive length"))}
    n_modes = 3
    if "modal" in raw:
        _check_keys(raw["modal"], ("n_modes",), "modal")
        n_modes = _get(raw["modal"], "n_modes", "modal", lambda v: _integer(v) and 1 <= v <= 12,
                       "an integer in [1, 12]", 3)
    return RunConfig(
        beam=_parse_beam(raw["beam"]),
        trajectory=_parse_trajectory(raw["trajectory"]),
        sim=_parse_sim(raw["sim"]),
        limits=limits,
        plate=_parse_plate(raw["plate"]) if "plate" in raw else None,
        gravity=float(g),
        scales=scales,
        n_modes=n_modes,
        classical_von_mises=classical,
        search=_parse_search(raw["search"]) if "search" in raw else None,
        sweep=_parse_sweep(raw["sweep"]) if "sweep" in raw else {},
    )


def parse_config(path):
    """Read and validate a JSON run configuration."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from None
    return config_from_dict(raw)


def with_override(raw, dotted, value):
    """Copy of the decoded config ``raw`` with ``section.key`` set to ``value``."""
    section, key = dotted.split(".", 1)
    out = json.loads(json.dumps(raw))
    out.setdefault(section, {})[key] = value
    return out
