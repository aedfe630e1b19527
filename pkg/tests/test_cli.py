import json

import numpy as np
import pytest

from spindomino import ValidationError, config_from_dict, domino_tones, load_config
from spindomino.cli import main
from spindomino.config import config_to_dict, serialize_config


def small_config(**overrides):
    raw = {
        "schema_version": 1,
        "chain": {
            "n_spins": 2,
            "offsets": [0.0, 100.0],
            "couplings": [[0.0, 20.0], [20.0, 0.0]],
        },
        "drive": {"auto_domino": {"amplitude": 5.0}},
        "sim": {"t_end": 0.02},
        "initial": "pseudopure_ground",
        "trigger": True,
    }
    raw.update(overrides)
    return raw


def write_config(tmp_path, raw, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return path


class TestConfigValidation:
    def test_defaults_filled(self):
        cfg = config_from_dict(small_config())
        assert cfg.sim.sample_every == 1
        assert cfg.sim.method == "expm_midpoint"
        assert cfg.sim.dt == pytest.approx(1.0 / (100.0 * 100.0))
        assert cfg.fwhm == 1.0
        assert cfg.outputs == "out"
        np.testing.assert_allclose(
            [h.frequency for h in cfg.drive.harmonics], domino_tones(cfg.chain))
        assert all(h.phase == 0.0 for h in cfg.drive.harmonics)

    def test_round_trip_is_canonical(self):
        cfg1 = config_from_dict(small_config())
        text = serialize_config(cfg1)
        cfg2 = config_from_dict(json.loads(text))
        assert config_to_dict(cfg1) == config_to_dict(cfg2)
        assert serialize_config(cfg2) == text

    def test_negative_dt_reports_field_path(self):
        raw = small_config(sim={"t_end": 0.02, "dt": -1.0})
        with pytest.raises(ValidationError, match=r"sim\.dt"):
            config_from_dict(raw)

    def test_asymmetric_couplings_rejected(self):
        raw = small_config()
        raw["chain"]["couplings"] = [[0.0, 20.0], [19.0, 0.0]]
        with pytest.raises(ValidationError, match="chain"):
            config_from_dict(raw)

    def test_drive_requires_exactly_one_source(self):
        raw = small_config(drive={})
        with pytest.raises(ValidationError, match="drive"):
            config_from_dict(raw)
        raw = small_config(drive={"harmonics": [], "auto_domino": {"amplitude": 1.0}})
        with pytest.raises(ValidationError, match="drive"):
            config_from_dict(raw)

    def test_auto_domino_needs_amplitude(self):
        raw = small_config(drive={"auto_domino": {}})
        with pytest.raises(ValidationError, match="amplitude"):
            config_from_dict(raw)

    def test_unknown_top_level_field(self):
        with pytest.raises(ValidationError, match="unknown"):
            config_from_dict(small_config(extra_knob=1))

    def test_initial_label_length(self):
        with pytest.raises(ValidationError, match="initial"):
            config_from_dict(small_config(initial="000"))

    def test_initial_bad_string(self):
        with pytest.raises(ValidationError, match="initial"):
            config_from_dict(small_config(initial="ground"))

    def test_schema_version_checked(self):
        with pytest.raises(ValidationError, match="schema_version"):
            config_from_dict(small_config(schema_version=2))

    def test_shipped_config_loads(self):
        from pathlib import Path
        cfg = load_config(Path(__file__).resolve().parents[1]
                          / "configs" / "butyrate_like.json")
        assert cfg.chain.n_spins == 4
        assert cfg.trigger is True
        assert len(cfg.drive.harmonics) == 3
        assert all(h.amplitude == 7.5 for h in cfg.drive.harmonics)


class TestSimulateCommand:
    def test_paired_outputs(self, tmp_path):
        path = write_config(tmp_path, small_config())
        out = tmp_path / "out"
        rc = main(["simulate", "--config", str(path), "--out", str(out), "--paired"])
        assert rc == 0
        trig = np.loadtxt(out / "trajectory_triggered.csv", delimiter=",", skiprows=1)
        untrig = np.loadtxt(out / "trajectory_untriggered.csv", delimiter=",", skiprows=1)
        summary = json.loads((out / "summary.json").read_text())
        assert {"triggered", "untriggered"} <= set(summary["runs"])
        assert "amplification_coefficient" in summary
        assert "time_of_max_inversion_s" in summary
        # the two runs differ at t = 0 only through the spin-1 flip
        assert trig[0, 0] == untrig[0, 0] == 0.0
        assert untrig[0, 1] - trig[0, 1] == pytest.approx(2.0, abs=1e-12)
        np.testing.assert_allclose(trig[0, 2], untrig[0, 2], atol=1e-12)

    def test_deterministic_outputs(self, tmp_path):
        path = write_config(tmp_path, small_config())
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", str(path), "--out", str(out1)]) == 0
        assert main(["simulate", "--config", str(path), "--out", str(out2)]) == 0
        assert (out1 / "trajectory_triggered.csv").read_bytes() == \
            (out2 / "trajectory_triggered.csv").read_bytes()

    def test_zero_amplitude_is_constant(self, tmp_path):
        raw = small_config(drive={"auto_domino": {"amplitude": 0.0}})
        path = write_config(tmp_path, raw)
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(path), "--out", str(out)]) == 0
        data = np.loadtxt(out / "trajectory_triggered.csv", delimiter=",", skiprows=1)
        np.testing.assert_allclose(data[:, 3], data[0, 3], atol=1e-12)

    def test_sweep_mode(self, tmp_path):
        path = write_config(tmp_path, small_config())
        out = tmp_path / "out"
        rc = main(["simulate", "--config", str(path), "--out", str(out),
                   "--sweep-t-end", "0:0.02:5"])
        assert rc == 0
        data = np.loadtxt(out / "sweep_triggered.csv", delimiter=",", skiprows=1)
        assert data.shape == (5, 4)
        # the zero-length point reports the initial (flipped) polarizations
        np.testing.assert_allclose(data[0, 1:], [-1.0, 1.0, 0.0], atol=1e-12)

    def test_print_config(self, tmp_path, capsys):
        path = write_config(tmp_path, small_config())
        assert main(["simulate", "--config", str(path), "--print-config"]) == 0
        echoed = json.loads(capsys.readouterr().out)
        assert echoed == config_to_dict(load_config(path))

    def test_validation_exit_code(self, tmp_path):
        path = write_config(tmp_path, small_config(sim={"t_end": -1.0}))
        assert main(["simulate", "--config", str(path)]) == 2

    def test_not_json_exit_code(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["simulate", "--config", str(path)]) == 2

    def test_accuracy_exit_code(self, tmp_path):
        raw = small_config(
            chain={"n_spins": 1, "offsets": [0.0], "couplings": [[0.0]]},
            drive={"harmonics": [{"frequency": 0.0, "amplitude": 50.0}]},
            sim={"t_end": 0.5, "dt": 2e-3, "method": "rk4"},
            initial="0")
        path = write_config(tmp_path, raw)
        assert main(["simulate", "--config", str(path), "--out",
                     str(tmp_path / "out")]) == 3


class TestSpectrumCommand:
    @pytest.mark.parametrize("selector,expected_lines", [
        ("thermal", 4), ("pseudopure", 2), ("pseudopure_flipped", 2)])
    def test_selectors(self, tmp_path, selector, expected_lines):
        path = write_config(tmp_path, small_config())
        out = tmp_path / "out"
        rc = main(["spectrum", "--config", str(path), "--out", str(out),
                   "--state", selector])
        assert rc == 0
        text = (out / f"sticks_{selector}.csv").read_text().splitlines()
        assert len(text) == 1 + expected_lines
        curve = np.loadtxt(out / f"spectrum_{selector}.csv", delimiter=",", skiprows=1)
        assert curve.shape[1] == 2

    def test_from_trajectory(self, tmp_path):
        path = write_config(tmp_path, small_config())
        out = tmp_path / "out"
        rc = main(["spectrum", "--config", str(path), "--out", str(out),
                   "--state", "from_trajectory:0.0"])
        assert rc == 0
        sticks = (out / "sticks_from_trajectory_0_0.csv").read_text().splitlines()
        assert len(sticks) >= 2

    def test_unknown_selector(self, tmp_path):
        path = write_config(tmp_path, small_config())
        assert main(["spectrum", "--config", str(path), "--state", "bogus"]) == 2


class TestTonesCommand:
    def test_json_output(self, tmp_path, capsys):
        path = write_config(tmp_path, small_config())
        assert main(["tones", "--config", str(path), "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        cfg = load_config(path)
        np.testing.assert_allclose(payload["domino_tones_hz"], domino_tones(cfg.chain))
        # full table: spin 1 and spin 2 each see one coupled partner
        assert len(payload["conditional_resonances"]) == 4

    def test_text_output(self, tmp_path, capsys):
        path = write_config(tmp_path, small_config())
        assert main(["tones", "--config", str(path)]) == 0
        assert "domino tones" in capsys.readouterr().out


class TestGateCheckCommand:
    def test_passes_for_four_spins(self, capsys):
        assert main(["gate-check", "--n-spins", "4", "--trials", "200"]) == 0
        out = capsys.readouterr().out
        assert "min_fidelity" in out and "OK" in out

    def test_ten_spins(self):
        assert main(["gate-check", "--n-spins", "10", "--trials", "50"]) == 0

    def test_single_spin_usage_error(self):
        assert main(["gate-check", "--n-spins", "1"]) == 2
