import json

import numpy as np
import pytest

from stirsap import ParseError, RunManifest, TWO_PI, parse_config
from stirsap.cli import dispatch
from stirsap.io import write_csv


class TestParseConfig:
    def test_empty_text_yields_reference_defaults(self):
        pulse, system, options = parse_config("")
        assert system.detuning == pytest.approx(TWO_PI * 2.5e9)
        assert system.reference_rabi == pytest.approx(TWO_PI * 5e6)
        assert pulse.total_time == pytest.approx(0.4e-3)
        assert pulse.width == pytest.approx(0.4e-3 / 6.0)
        assert pulse.delay == pytest.approx(0.4e-3 / 10.0)
        assert pulse.laser_phase == 0.0
        assert options["fidelity_target"] == 0.994

    def test_total_time_override_rederives_shape(self):
        pulse, _, _ = parse_config("total_time = 1 ms\n")
        assert pulse.total_time == pytest.approx(1e-3)
        assert pulse.width == pytest.approx(1e-3 / 6.0)
        assert pulse.delay == pytest.approx(1e-3 / 10.0)

    def test_explicit_width_kept(self):
        pulse, _, _ = parse_config("total_time = 1 ms\nwidth = 0.2 ms\n")
        assert pulse.width == pytest.approx(0.2e-3)

    def test_zero_width_cites_invariant_and_line(self):
        with pytest.raises(ParseError) as err:
            parse_config("# comment\nwidth = 0 ms\n")
        assert "width" in str(err.value)
        assert err.value.line == 2

    def test_unknown_key_reports_line(self):
        with pytest.raises(ParseError) as err:
            parse_config("detuning = 2.5 GHz\nshimmer = 3\n")
        assert err.value.line == 2

    def test_malformed_number_reports_line(self):
        with pytest.raises(ParseError) as err:
            parse_config("detuning = fast\n")
        assert err.value.line == 1

    def test_missing_equals_sign(self):
        with pytest.raises(ParseError):
            parse_config("detuning 2.5 GHz\n")

    def test_unit_suffixes(self):
        pulse, system, _ = parse_config(
            "detuning = 2.5 GHz\n"
            "reference_rabi = 5 MHz\n"
            "peak_pump = 5000 kHz\n"
            "total_time = 400 us\n"
        )
        assert system.detuning == pytest.approx(TWO_PI * 2.5e9)
        assert pulse.peak_pump == pytest.approx(TWO_PI * 5e6)
        assert pulse.total_time == pytest.approx(4e-4)

    def test_unsuffixed_numbers_are_base_units(self):
        pulse, system, _ = parse_config("detuning = 2.5e9\ntotal_time = 4e-4\n")
        assert system.detuning == pytest.approx(TWO_PI * 2.5e9)
        assert pulse.total_time == pytest.approx(4e-4)

    def test_options_parsed(self):
        _, _, options = parse_config("fidelity_target = 0.99\nsamples = 129\nthreads = 4\n")
        assert options["fidelity_target"] == 0.99
        assert options["samples"] == 129
        assert options["threads"] == 4


class TestManifest:
    def test_round_trip_is_bit_identical(self):
        manifest = RunManifest(
            command="dynamics",
            config_path="run.cfg",
            overrides=(("protocol", "stirap"), ("total_time", "0.4ms")),
            output_dir="out",
            tool_version="0.1.0",
            timestamp="2026-08-10T00:00:00+00:00",
        )
        text = manifest.to_json()
        again = RunManifest.from_json(text)
        assert again == manifest
        assert again.to_json() == text


class TestCsv:
    def test_round_trip_precision(self, tmp_path):
        values = np.array([1.0 / 3.0, 1e-17, 123456.789012345678, np.pi])
        path = tmp_path / "x.csv"
        write_csv(path, ["v"], [values])
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "v"
        parsed = np.array([float(x) for x in lines[1:]])
        assert np.all(parsed == values)


class TestDispatch:
    def test_unknown_command_is_usage_error(self):
        assert dispatch(["entangle"]) == 2

    def test_missing_command_is_usage_error(self):
        assert dispatch([]) == 2

    def test_invalid_config_is_domain_error(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("width = 0 ms\n")
        code = dispatch(["validate", "--config", str(cfg)])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_validate_prints_report(self, tmp_path, capsys):
        code = dispatch(["validate", "--out", str(tmp_path)])
        out = capsys.readouterr().out
        assert code == 0
        assert "large-detuning" in out
        assert "configuration valid" in out

    def test_pulses_csv_columns_and_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            code = dispatch(
                ["pulses", "--out", str(out), "--samples", "256", "--quiet"]
            )
            assert code == 0
        csv1 = (out1 / "pulses.csv").read_bytes()
        csv2 = (out2 / "pulses.csv").read_bytes()
        assert csv1 == csv2
        header = csv1.decode().splitlines()[0]
        assert header == "t,omega_p,omega_s,omega_a,omega_p_tilde,omega_s_tilde"
        meta = json.loads((out1 / "pulses.json").read_text())
        assert meta["command"] == "pulses"
        assert meta["manifest"]["seedless"] is True

    def test_dynamics_prints_final_population(self, tmp_path, capsys):
        code = dispatch(
            [
                "dynamics",
                "--protocol",
                "stirap",
                "--total-time",
                "0.4ms",
                "--out",
                str(tmp_path),
                "--quiet",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "final P2 = 0.33" in out
        header = (tmp_path / "dynamics.csv").read_text().splitlines()[0]
        assert header == "t,p1,p2,nx,ny,nz,bx_hat,by_hat,bz_hat"

    def test_output_dir_from_environment(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("STIRSAP_OUT", str(tmp_path))
        code = dispatch(["pulses", "--samples", "64", "--quiet"])
        assert code == 0
        assert (tmp_path / "pulses.csv").exists()

    def test_cycles_command(self, tmp_path, capsys):
        code = dispatch(
            ["cycles", "--cycles", "2", "--out", str(tmp_path), "--quiet"]
        )
        assert code == 0
        lines = (tmp_path / "cycles.csv").read_text().strip().splitlines()
        assert (
            lines[0]
            == "cycle,p1_from_ground,p2_from_ground,p1_from_superposition,p2_from_superposition"
        )
        assert len(lines) == 3

    def test_sweep_detuning_command(self, tmp_path):
        code = dispatch(
            ["sweep-detuning", "--points", "5", "--out", str(tmp_path), "--quiet"]
        )
        assert code == 0
        lines = (tmp_path / "sweep_detuning.csv").read_text().strip().splitlines()
        assert lines[0] == "detuning_offset,efficiency_stirsap"
        effs = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(e > 0.99 for e in effs)

    def test_sweep_time_command(self, tmp_path):
        code = dispatch(
            ["sweep-time", "--points", "3", "--out", str(tmp_path), "--quiet"]
        )
        assert code == 0
        lines = (tmp_path / "sweep_time.csv").read_text().strip().splitlines()
        assert lines[0] == "total_time,efficiency_stirap,efficiency_stirsap"
        assert len(lines) == 4

    def test_sweep_amplitude_command(self, tmp_path):
        code = dispatch(
            ["sweep-amplitude", "--points", "3", "--threads", "3",
             "--out", str(tmp_path), "--quiet"]
        )
        assert code == 0
        header = (tmp_path / "sweep_amplitude.csv").read_text().splitlines()[0]
        assert header == (
            "amplitude_scale,efficiency_stirsap,efficiency_stirsap_long,"
            "efficiency_resonant_pi"
        )

    def test_sweep_delay_command(self, tmp_path):
        code = dispatch(
            ["sweep-delay", "--points", "3", "--out", str(tmp_path), "--quiet"]
        )
        assert code == 0
        header = (tmp_path / "sweep_delay.csv").read_text().splitlines()[0]
        assert header == "delay_scale,efficiency_fixed_shapes,efficiency_adapted_shapes"

    def test_peaks_command(self, tmp_path):
        code = dispatch(
            ["peaks", "--times", "4", "--out", str(tmp_path), "--quiet"]
        )
        assert code == 0
        lines = (tmp_path / "peaks.csv").read_text().strip().splitlines()
        assert lines[0] == "total_time,peak_stirap,peak_stirsap"
        _, ap, sa = (float(x) for x in lines[1].split(","))
        assert sa < ap

    def test_speedup_command(self, tmp_path, capsys):
        code = dispatch(
            ["speedup", "--peaks", "2.0", "--out", str(tmp_path), "--quiet"]
        )
        assert code == 0
        lines = (tmp_path / "speedup.csv").read_text().strip().splitlines()
        assert lines[0] == "peak,t_adiabatic,t_shortcut,ratio,difference"
        ratio = float(lines[1].split(",")[3])
        assert 5.0 < ratio < 6.0

    def test_bloch_command(self, tmp_path):
        code = dispatch(
            ["bloch", "--samples", "101", "--out", str(tmp_path), "--quiet"]
        )
        assert code == 0
        header = (tmp_path / "bloch.csv").read_text().splitlines()[0]
        assert header.startswith("t,nx_bare,ny_bare,nz_bare,nx_total")
        assert header.endswith("b0x_hat,b0y_hat,b0z_hat,bx_hat,by_hat,bz_hat")
