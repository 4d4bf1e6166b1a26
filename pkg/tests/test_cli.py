import copy
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from flexpath.cli import main
from flexpath.io import read_csv

HERE = os.path.dirname(__file__)
CONFIGS = os.path.join(HERE, "..", "configs")

UNIT = {
    "beam": {"E": 1.0, "I": 1.0, "rho": 1.0, "L": 1.0, "h": 0.01, "sigma_yield": 1.0,
             "n_nodes": 21, "backend": "fem"},
    "trajectory": {"generator": "quintic", "theta0": 1.5707963267948966,
                   "theta1": 1.5707963267948966, "R": 0.0, "T": 0.5},
    "sim": {"dt": 0.01},
    "limits": {"sigma_max": 1.0, "jerk_max_theta": 1.0, "jerk_max_r": 1.0},
    "modal": {"n_modes": 3},
}

STRIP = {
    "beam": {"E": 2.0e11, "I": 4.1667e-12, "rho": 0.3925, "L": 0.5, "h": 5.0e-4,
             "sigma_yield": 2.5e8, "n_nodes": 21, "backend": "fem"},
    "trajectory": {"generator": "quintic", "theta0": 1.5707963267948966, "theta1": 0.0,
                   "R": 0.1, "T": 1.0},
    "sim": {"dt": 0.005},
    "limits": {"sigma_max": 1.0e9, "jerk_max_theta": 1e6, "jerk_max_r": 1e6},
    "search": {"T_lo": 0.3, "T_hi": 3.0, "n_scan": 4, "rtol": 0.1},
    "sweep": {"trajectory.T": [0.5, 1.0], "sim.backend": ["fd", "fem"]},
}


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def run(tmp_path, cmd, cfg, *extra, out="out"):
    path = write(tmp_path, cfg) if isinstance(cfg, dict) else cfg
    code = main([cmd, "--config", path, "--out", str(tmp_path / out), "--quiet", "--no-figures",
                 *extra])
    return code, tmp_path / out


def edited(base, **sections):
    cfg = copy.deepcopy(base)
    for sec, vals in sections.items():
        cfg.setdefault(sec, {}).update(vals)
    return cfg


class TestSubcommands:
    def test_modal_betas(self, tmp_path):
        code, out = run(tmp_path, "modal", UNIT)
        assert code == 0
        data = json.loads((out / "modal.json").read_text())
        assert [round(b, 6) for b in data["betas"]] == [1.875104, 4.694091, 7.854757]
        header, cols = read_csv(out / "modes.csv")
        assert header == ["x", "mode_1", "mode_2", "mode_3"]

    def test_check_zero_load_passes(self, tmp_path):
        code, out = run(tmp_path, "check", UNIT)
        assert code == 0
        assert json.loads((out / "report.json").read_text())["pass"] is True

    def test_check_fails_with_exit_3(self, tmp_path):
        cfg = edited(STRIP, limits={"sigma_max": 1.0})
        code, out = run(tmp_path, "check", cfg)
        assert code == 3
        assert json.loads((out / "report.json").read_text())["pass"] is False

    def test_simulate_first_row_at_rest(self, tmp_path):
        code, out = run(tmp_path, "simulate", STRIP)
        assert code == 0
        header, data = read_csv(out / "simulation.csv")
        assert header == ["t", "x", "w", "sigma"]
        first = data[data[:, 0] == 0.0]
        assert len(first) == 21 and np.all(first[:, 2] == 0.0)
        summary = json.loads((out / "simulation_summary.json").read_text())
        assert summary["peak_stress"]["value"] > 0

    def test_static(self, tmp_path):
        code, out = run(tmp_path, "static", STRIP, "--theta", "0")
        assert code == 0
        header, data = read_csv(out / "static.csv")
        assert header == ["x", "w", "sigma"] and data[-1, 1] < 0

    def test_plate(self, tmp_path):
        cfg = edited(STRIP, plate={"E": 2e11, "nu": 0.3, "h": 5e-4, "rho": 7850.0,
                                   "a": 0.05, "b": 0.05, "nx": 17, "ny": 17})
        code, out = run(tmp_path, "plate", cfg)
        assert code == 0
        header, data = read_csv(out / "plate.csv")
        assert header == ["x", "y", "w0", "M11", "M22", "M12", "sigma_vm_top"]
        assert data.shape == (17 * 17, 7)
        side = json.loads((out / "plate.json").read_text())
        assert side["grid"] == [17, 17]

    def test_plate_free_edge_exit_5(self, tmp_path):
        cfg = edited(STRIP, plate={"E": 2e11, "nu": 0.3, "h": 5e-4, "rho": 7850.0,
                                   "a": 0.05, "b": 0.05, "nx": 17, "ny": 17,
                                   "clamped_edges": ["left"]})
        assert run(tmp_path, "plate", cfg)[0] == 5

    def test_mintime(self, tmp_path):
        code, out = run(tmp_path, "mintime", STRIP)
        assert code == 0
        data = json.loads((out / "mintime.json").read_text())
        assert data["feasible"] and data["T_star"] == 0.3

    def test_mintime_infeasible_exit_4(self, tmp_path):
        cfg = edited(STRIP, limits={"sigma_max": 1.0})
        code, out = run(tmp_path, "mintime", cfg)
        assert code == 4
        data = json.loads((out / "mintime.json").read_text())
        assert data["T_star"] is None and len(data["scan"]) == 4

    def test_segmented_trajectory(self, tmp_path):
        cfg = copy.deepcopy(STRIP)
        cfg["trajectory"] = {"theta_segments": [
            {"coefficients": [0.0, 0.0, 1.5, -1.0], "duration": 1.0},
            {"coefficients": [0.5], "duration": 0.5},
        ]}
        code, out = run(tmp_path, "simulate", cfg)
        assert code == 0
        summary = json.loads((out / "simulation_summary.json").read_text())
        assert summary["T"] == 1.5
        assert run(tmp_path, "mintime", cfg, out="m")[0] == 2

    def test_sweep(self, tmp_path):
        code, out = run(tmp_path, "sweep", STRIP)
        assert code == 0
        data = json.loads((out / "sweep.json").read_text())
        assert data["keys"] == ["sim.backend", "trajectory.T"] and len(data["runs"]) == 4
        assert sorted(os.listdir(out / "sweep")) == [f"run_{k:03d}.json" for k in range(4)]

    def test_sweep_thread_cap(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FLEXPATH_THREADS", "1")
        code, out1 = run(tmp_path, "sweep", STRIP, out="a")
        monkeypatch.setenv("FLEXPATH_THREADS", "4")
        _, out4 = run(tmp_path, "sweep", STRIP, out="b")
        assert code == 0
        assert (out1 / "sweep.json").read_bytes() == (out4 / "sweep.json").read_bytes()

    def test_bad_thread_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FLEXPATH_THREADS", "zero")
        assert run(tmp_path, "sweep", STRIP)[0] == 2

    def test_figures_written(self, tmp_path):
        path = write(tmp_path, STRIP)
        assert main(["modal", "--config", path, "--out", str(tmp_path / "f"), "--quiet"]) == 0
        assert (tmp_path / "f" / "modes.png").stat().st_size > 0


class TestExitCodes:
    def test_usage_unknown_command(self, tmp_path, capsys):
        assert main(["launch", "--config", "x.json"]) == 1
        assert "launch" in capsys.readouterr().err

    def test_usage_missing_config(self):
        assert main(["simulate"]) == 1

    def test_config_missing_file(self, tmp_path, capsys):
        assert run(tmp_path, "simulate", str(tmp_path / "none.json"))[0] == 2
        assert "not found" in capsys.readouterr().err

    def test_config_typo(self, tmp_path, capsys):
        cfg = copy.deepcopy(UNIT)
        cfg["beem"] = cfg.pop("beam")
        assert run(tmp_path, "simulate", cfg)[0] == 2
        assert "'beam'" in capsys.readouterr().err

    def test_missing_section_for_command(self, tmp_path):
        cfg = copy.deepcopy(UNIT)
        del cfg["limits"]
        assert run(tmp_path, "check", cfg)[0] == 2


class TestDeterminism:
    @pytest.mark.parametrize("cmd", ["simulate", "modal", "static"])
    def test_byte_identical(self, tmp_path, cmd):
        path = write(tmp_path, STRIP)
        outs = []
        for k in range(2):
            assert main([cmd, "--config", path, "--out", str(tmp_path / f"o{k}"), "--quiet"]) == 0
            outs.append(tmp_path / f"o{k}")
        names = sorted(os.listdir(outs[0]))
        assert names == sorted(os.listdir(outs[1]))
        for n in names:
            assert (outs[0] / n).read_bytes() == (outs[1] / n).read_bytes(), n

    def test_console_entry_point(self, tmp_path):
        path = write(tmp_path, UNIT)
        proc = subprocess.run([sys.executable, "-m", "flexpath.cli", "modal", "--config", path,
                               "--out", str(tmp_path / "o"), "--no-figures"],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert "modal.json" in proc.stdout

    def test_example_config_runs(self, tmp_path):
        cfg = os.path.join(CONFIGS, "unit_beam.json")
        assert run(tmp_path, "check", cfg)[0] == 0
