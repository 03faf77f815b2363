import json
import math
from pathlib import Path

import numpy as np
import pytest
import yaml

from hoisim.analytic import KerrCascadeParams, kerr_cascade_interference
from hoisim.cli import ConfigError, main, parse_quantity
from hoisim.output import read_csv

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


class TestParseQuantity:
    def test_length_units(self):
        assert parse_quantity("5.8 nm", "length", "a") == pytest.approx(5.8e-9)
        assert parse_quantity("1 um", "length", "a") == pytest.approx(1e-6)
        assert parse_quantity("1 µm", "length", "a") == pytest.approx(1e-6)
        assert parse_quantity("-30 um", "length", "a") == pytest.approx(-3e-5)

    def test_time_angle_mass_area(self):
        assert parse_quantity("1 ms", "time", "t") == pytest.approx(1e-3)
        assert parse_quantity("0.5 rad", "angle", "t") == pytest.approx(0.5)
        assert parse_quantity("180 deg", "angle", "t") == pytest.approx(math.pi)
        assert parse_quantity("1.45e-25 kg", "mass", "m") == pytest.approx(1.45e-25)
        assert parse_quantity("1 um^2", "area", "s") == pytest.approx(1e-12)

    def test_bare_number_rejected(self):
        with pytest.raises(ConfigError):
            parse_quantity(5.8, "length", "a")

    def test_wrong_unit_rejected(self):
        with pytest.raises(ConfigError):
            parse_quantity("3 kg", "length", "a")


class TestRun:
    def test_tritter_saturation_matches_closed_form(self, tmp_path):
        code = main(
            ["run", str(CONFIGS / "tritter_saturation.yaml"), "--out-dir", str(tmp_path)]
        )
        assert code == 0
        payload = json.loads((tmp_path / "tritter_saturation_sorkin.json").read_text())
        assert payload["sorkin_term"] == pytest.approx(-0.04, abs=1e-6)
        meta, header, rows = read_csv(tmp_path / "tritter_saturation_table.csv")
        assert meta["schema_version"] == "1"
        assert header == ["pattern", "intensity"]
        assert len(rows) == 8

    def test_json_format(self, tmp_path):
        code = main(
            [
                "run",
                str(CONFIGS / "tritter_saturation.yaml"),
                "--out-dir",
                str(tmp_path),
                "--format",
                "json",
            ]
        )
        assert code == 0
        payload = json.loads((tmp_path / "tritter_saturation_table.json").read_text())
        assert len(payload["rows"]) == 8

    def test_malformed_config_exits_2_without_output(self, tmp_path, capsys):
        bad = tmp_path / "bad.yaml"
        bad.write_text("kind: fock\nmodes: 3\ninput: {}\ncircuit: []\n")
        code = main(["run", str(bad), "--out-dir", str(tmp_path / "out")])
        assert code == 2
        record = json.loads(capsys.readouterr().err.strip())
        assert record["error"]["code"] == 2
        assert not (tmp_path / "out").exists() or not list((tmp_path / "out").iterdir())

    def test_missing_file_exits_4(self, tmp_path):
        assert main(["run", str(tmp_path / "nope.yaml")]) == 4

    def test_unitless_quantity_exits_2(self, tmp_path):
        bad = tmp_path / "bad_units.yaml"
        config = yaml.safe_load((CONFIGS / "gpe_rb87.yaml").read_text())
        config["condensate"]["scattering_length"] = 5.8e-9
        bad.write_text(yaml.safe_dump(config))
        assert main(["run", str(bad), "--out-dir", str(tmp_path)]) == 2


class TestSweep:
    def test_fock_example_sweep_traces_half_sine_squared(self, tmp_path):
        code = main(
            ["sweep", str(CONFIGS / "fock_example.yaml"), "--out-dir", str(tmp_path)]
        )
        assert code == 0
        meta, header, rows = read_csv(tmp_path / "fock_example_sweep.csv")
        assert header == ["theta_rad", "sorkin"]
        assert len(rows) == 9
        for theta_s, value_s in rows:
            theta, value = float(theta_s), float(value_s)
            assert value == pytest.approx(-0.5 * math.sin(theta / 2) ** 2, abs=1e-10)

    def test_theta_zero_row_is_exactly_zero(self, tmp_path):
        main(["sweep", str(CONFIGS / "fock_example.yaml"), "--out-dir", str(tmp_path)])
        _, _, rows = read_csv(tmp_path / "fock_example_sweep.csv")
        assert float(rows[0][0]) == 0.0
        assert float(rows[0][1]) == 0.0

    def test_fringe_sweep_matches_oracle_magnitude(self, tmp_path):
        code = main(
            ["sweep", str(CONFIGS / "kerr_cascade.yaml"), "--out-dir", str(tmp_path)]
        )
        assert code == 0
        _, header, rows = read_csv(tmp_path / "kerr_cascade_sweep.csv")
        phi = np.array([float(r[0]) for r in rows])
        val = np.array([float(r[1]) for r in rows])
        design = np.column_stack([np.ones_like(phi), np.cos(phi), np.sin(phi)])
        coef, *_ = np.linalg.lstsq(design, val, rcond=None)
        magnitude = math.hypot(coef[1], coef[2])
        oracle = kerr_cascade_interference(KerrCascadeParams(1.0, 0.5, 3)).magnitude
        assert magnitude == pytest.approx(oracle, rel=1e-9)
        residual = np.max(np.abs(val - design @ coef))
        assert residual < 1e-9 * magnitude

    def test_deterministic_and_resumable(self, tmp_path):
        args = ["sweep", str(CONFIGS / "fock_example.yaml"), "--out-dir", str(tmp_path)]
        assert main(args) == 0
        out = tmp_path / "fock_example_sweep.csv"
        first = out.read_bytes()
        # markers exist; a rerun must reuse them and reproduce the bytes
        markers = sorted((tmp_path / "fock_example_points").glob("point_*.json"))
        assert len(markers) == 9
        out.unlink()
        assert main(args) == 0
        assert out.read_bytes() == first

    def test_workers_give_identical_output(self, tmp_path):
        serial_dir = tmp_path / "serial"
        parallel_dir = tmp_path / "parallel"
        base = ["sweep", str(CONFIGS / "fock_example.yaml")]
        assert main(base + ["--out-dir", str(serial_dir)]) == 0
        assert main(base + ["--out-dir", str(parallel_dir), "--workers", "3"]) == 0
        assert (serial_dir / "fock_example_sweep.csv").read_bytes() == (
            parallel_dir / "fock_example_sweep.csv"
        ).read_bytes()


class TestCheckAndConvergence:
    def test_check_passes_on_bundled_scenarios(self):
        assert main(["check", str(CONFIGS / "kerr_cascade.yaml")]) == 0
        assert main(["check", str(CONFIGS / "tritter_saturation.yaml")]) == 0

    def test_convergence_subcommand(self, tmp_path):
        config = yaml.safe_load((CONFIGS / "gpe_rb87.yaml").read_text())
        config["condensate"]["evolution_time"] = "0.2 ms"
        config["solver"]["dt"] = "1e-6 s"
        fast = tmp_path / "fast_rb.yaml"
        fast.write_text(yaml.safe_dump(config))
        code = main(["convergence", str(fast), "--out-dir", str(tmp_path)])
        assert code == 0
        payload = json.loads((tmp_path / "gpe_rb87_convergence.json").read_text())
        assert payload["passed"] is True

    def test_convergence_rejects_non_gpe(self):
        assert main(["convergence", str(CONFIGS / "kerr_cascade.yaml")]) == 2


class TestGpeRun:
    def test_profile_csv_schema(self, tmp_path):
        config = yaml.safe_load((CONFIGS / "gpe_rb87.yaml").read_text())
        config["condensate"]["evolution_time"] = "0.1 ms"
        config["solver"]["dt"] = "1e-6 s"
        fast = tmp_path / "fast_rb.yaml"
        fast.write_text(yaml.safe_dump(config))
        code = main(["run", str(fast), "--out-dir", str(tmp_path)])
        assert code == 0
        meta, header, rows = read_csv(tmp_path / "gpe_rb87_profile.csv")
        assert header[:3] == ["x_um", "i3", "i3_atom_scaled"]
        assert len(header) == 3 + 8
        assert len(rows) == 2048
        assert meta["x_unit"] == "um"
        x = np.array([float(r[0]) for r in rows])
        assert x[0] == pytest.approx(-30.0)
        i3 = np.array([float(r[1]) for r in rows])
        scaled = np.array([float(r[2]) for r in rows])
        assert np.allclose(scaled, 1000 * i3)
