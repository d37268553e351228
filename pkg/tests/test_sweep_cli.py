import json
import math

import numpy as np
import pytest

from magnomech import (
    ConfigError,
    SweepAxis,
    SweepSpec,
    emit,
    parse_config,
    resolve_system_params,
    run_point,
    run_sweep,
    sweep_spec_from_config,
)
from magnomech.cli import main as cli_main
from magnomech.params import TWO_PI


class TestConfigParsing:
    def test_basic_lines_comments_and_types(self):
        text = """
        # full-line comment
        temperature = 0.05   # trailing comment
        reflectivity = 0.9
        nonreciprocity = true
        measures = entanglement,steering
        """
        config = parse_config(text)
        assert config == {
            "temperature": 0.05,
            "reflectivity": 0.9,
            "nonreciprocity": True,
            "measures": "entanglement,steering",
        }

    def test_malformed_line(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config("temperature 0.05")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("theta = 0\ntheta = 1\n")

    def test_unknown_parameter_fails_at_resolve(self):
        with pytest.raises(ConfigError, match="unknown"):
            run_point({"not_a_parameter": 1.0})

    def test_unknown_axis_parameter_fails_at_parse(self):
        config = {"axis1": "bogus", "axis1_start": 0, "axis1_stop": 1, "axis1_count": 3}
        with pytest.raises(ConfigError):
            sweep_spec_from_config(config)

    def test_axis_needs_bounds(self):
        with pytest.raises(ConfigError, match="axis1_start"):
            sweep_spec_from_config({"axis1": "temperature"})

    def test_axes_must_differ(self):
        with pytest.raises(ConfigError, match="distinct"):
            SweepSpec(
                SweepAxis("temperature", 0, 1, 3),
                SweepAxis("temperature", 0, 1, 3),
            )

    def test_count_minimum(self):
        with pytest.raises(ConfigError, match="count"):
            SweepSpec(SweepAxis("temperature", 0, 1, 1))


class TestUnits:
    def test_frequency_keys_are_scaled(self):
        p = resolve_system_params({"omega_b1": 20.15e6})
        assert p.omega_b1 == pytest.approx(TWO_PI * 20.15e6, rel=1e-15)

    def test_plain_keys_are_not(self):
        p = resolve_system_params({"temperature": 0.25, "theta": 1.2})
        assert p.temperature == 0.25 and p.theta == 1.2

    def test_delta_a_tracks_magnon_detuning(self):
        p = resolve_system_params({"delta_m_tilde": -7e6})
        assert p.delta_a == p.delta_m_tilde
        q = resolve_system_params({"delta_m_tilde": -7e6, "delta_a": 3e6})
        assert q.delta_a == pytest.approx(TWO_PI * 3e6, rel=1e-15)


class TestRunPoint:
    def test_baseline_report(self):
        report = run_point({"temperature": 0.0})
        assert report.stable and report.physical
        assert report.entanglement("c", "a") > 0.05

    def test_unstable_point_has_no_measures(self):
        # theta=0 at high reflectivity turns the optical mode into an
        # amplifier the couplings cannot absorb
        report = run_point({"reflectivity": 0.9, "theta": 0.0})
        assert not report.stable
        assert report.reason == "unstable"
        assert report.pairwise_E == {} and report.steering == {}

    def test_zero_coupling_null(self):
        report = run_point({"G_m": 0, "G_c": 0, "D_ma": 0, "D_b1b2": 0})
        assert report.stable
        assert all(v < 1e-10 for v in report.pairwise_E.values())
        assert all(v < 1e-10 for v in report.steering.values())
        assert all(abs(v) < 1e-10 for v in report.tripartite_R.values())

    def test_measure_subset(self):
        report = run_point({"measures": "entanglement"})
        assert report.pairwise_E and not report.steering and not report.tripartite_R


def _tiny_sweep(**kwargs):
    fixed = {"G_m": 0, "G_c": 0, "D_ma": 0, "D_b1b2": 0}
    fixed.update(kwargs.pop("fixed", {}))
    return SweepSpec(
        SweepAxis("temperature", 0.0, 0.1, 2),
        fixed=fixed,
        **kwargs,
    )


class TestRunSweep:
    def test_zero_coupling_rows_are_null(self):
        table = run_sweep(_tiny_sweep(measures=("entanglement",)))
        assert len(table.rows) == 2
        idx = {c: i for i, c in enumerate(table.columns)}
        for row in table.rows:
            assert row[idx["stable"]] is True
            for col in table.columns:
                if col.startswith("E_"):
                    assert row[idx[col]] < 1e-10

    def test_grid_order_is_row_major(self):
        spec = SweepSpec(
            SweepAxis("temperature", 0.0, 0.1, 2),
            SweepAxis("reflectivity", 0.0, 0.2, 3),
            measures=("entanglement",),
        )
        table = run_sweep(spec)
        axes = [(row[0], row[1]) for row in table.rows]
        expected = [(t, r) for t in (0.0, 0.1) for r in (0.0, 0.1, 0.2)]
        assert axes == pytest.approx(expected)

    def test_axis_columns_carry_units(self):
        table = run_sweep(_tiny_sweep())
        assert table.columns[0] == "temperature_K"
        spec = SweepSpec(SweepAxis("delta_m_tilde", -40e6, 0, 2), measures=("entanglement",))
        assert run_sweep(spec).columns[0] == "delta_m_tilde_hz"

    def test_unstable_rows_are_masked(self, tmp_path):
        spec = SweepSpec(
            SweepAxis("reflectivity", 0.0, 0.9, 4),
            fixed={"theta": 0.0, "temperature": 0.0},
            measures=("entanglement",),
        )
        table = run_sweep(spec)
        idx = {c: i for i, c in enumerate(table.columns)}
        stables = [row[idx["stable"]] for row in table.rows]
        assert stables == [True, True, False, False]
        for row in table.rows:
            if not row[idx["stable"]]:
                assert row[idx["reason"]] == "unstable"
                assert all(
                    row[idx[c]] is None for c in table.columns if c.startswith("E_")
                )
        out = tmp_path / "masked.csv"
        emit(table, "csv", out)
        lines = out.read_text().splitlines()
        e_ca_col = lines[0].split(",").index("E_ca")
        assert lines[3].split(",")[e_ca_col] == ""  # empty cell, not zero

    def test_nonreciprocity_columns(self):
        spec = _tiny_sweep(
            fixed={"barnett_shift": 4.03e6},
            measures=("entanglement",),
            nonreciprocity=True,
        )
        table = run_sweep(spec)
        assert "E_ca_plus" in table.columns
        assert "E_ca_minus" in table.columns
        assert "C_E_ca" in table.columns
        idx = {c: i for i, c in enumerate(table.columns)}
        for row in table.rows:
            assert row[idx["stable_plus"]] and row[idx["stable_minus"]]
            # decoupled system: zero on both sides, contrast defined as 0
            assert row[idx["C_E_ca"]] == 0.0

    def test_worker_counts_agree(self, tmp_path):
        spec = _tiny_sweep()
        serial = tmp_path / "serial.csv"
        parallel = tmp_path / "parallel.csv"
        emit(run_sweep(spec, workers=1), "csv", serial)
        emit(run_sweep(spec, workers=2), "csv", parallel)
        assert serial.read_bytes() == parallel.read_bytes()

    def test_detuning_grid_peaks_at_cooling_point(self):
        # microwave-optical entanglement is maximal where the magnon
        # drive sits at -omega_b1 and the optical drive at +omega_b2
        spec = SweepSpec(
            SweepAxis("delta_m_tilde", -2 * 20.15e6, 0.0, 17),
            SweepAxis("delta_c_tilde", 0.0, 2 * 20.11e6, 17),
            measures=("entanglement",),
        )
        table = run_sweep(spec)
        idx = {c: i for i, c in enumerate(table.columns)}
        best = max(
            (r for r in table.rows if r[idx["stable"]]),
            key=lambda r: r[idx["E_ca"]],
        )
        assert best[idx["E_ca"]] > 0.1
        assert best[0] / 20.15e6 == pytest.approx(-1.0, abs=0.15)
        assert best[1] / 20.11e6 == pytest.approx(+1.0, abs=0.15)

    def test_phase_grid_structure(self):
        # with damping gamma_c*(1 - 2*L*cos(theta)), the loop deepens the
        # optical damping near |theta| = pi: entanglement is maximal
        # there and grows with reflectivity along that phase
        spec = SweepSpec(
            SweepAxis("theta", -math.pi, math.pi, 17),
            SweepAxis("reflectivity", 0.0, 0.95, 11),
            fixed={"barnett_shift": 0.2 * 20.15e6},
            measures=("entanglement",),
        )
        table = run_sweep(spec)
        idx = {c: i for i, c in enumerate(table.columns)}
        stable = [r for r in table.rows if r[idx["stable"]]]
        best = max(stable, key=lambda r: r[idx["E_ca"]])
        assert abs(best[0]) == pytest.approx(math.pi, abs=0.5)
        along_pi = sorted(
            (r for r in stable if abs(r[0] - math.pi) < 1e-9),
            key=lambda r: r[1],
        )
        values = [r[idx["E_ca"]] for r in along_pi]
        assert values == sorted(values)
        assert values[-1] > 10 * values[0]


class TestEmit:
    def test_single_row_csv(self, tmp_path):
        table = run_sweep(_tiny_sweep(measures=("entanglement",)))
        table.rows = table.rows[:1]
        out = tmp_path / "one.csv"
        emit(table, "csv", out)
        lines = out.read_text().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("temperature_K,stable,reason")

    def test_repeat_emission_is_byte_identical(self, tmp_path):
        table = run_sweep(_tiny_sweep())
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit(table, "csv", a)
        emit(table, "csv", b)
        assert a.read_bytes() == b.read_bytes()

    def test_csv_json_value_agreement(self, tmp_path):
        table = run_sweep(_tiny_sweep())
        csv_path, json_path = tmp_path / "t.csv", tmp_path / "t.json"
        emit(table, "csv", csv_path)
        emit(table, "json", json_path)
        objects = json.loads(json_path.read_text())
        lines = csv_path.read_text().splitlines()
        header = lines[0].split(",")
        for obj, line in zip(objects, lines[1:]):
            cells = line.split(",")
            for col, cell in zip(header, cells):
                ref = obj[col]
                if isinstance(ref, float):
                    assert float(cell) == pytest.approx(ref, abs=1e-12 * max(1.0, abs(ref)))
                elif isinstance(ref, bool):
                    assert cell == ("true" if ref else "false")

    def test_csv_has_full_precision(self, tmp_path):
        table = run_sweep(SweepSpec(SweepAxis("temperature", 0.0, 0.1, 2)))
        out = tmp_path / "prec.csv"
        emit(table, "csv", out)
        idx = table.columns.index("E_ca")
        cell = out.read_text().splitlines()[1].split(",")[idx]
        mantissa = cell.split("e")[0].replace("-", "").replace(".", "")
        assert len(mantissa) >= 10

    def test_empty_table_rejected(self, tmp_path):
        table = run_sweep(_tiny_sweep())
        table.rows = []
        with pytest.raises(ValueError):
            emit(table, "csv", tmp_path / "x.csv")

    def test_unknown_format(self, tmp_path):
        table = run_sweep(_tiny_sweep())
        with pytest.raises(ConfigError):
            emit(table, "yaml", tmp_path / "x.yaml")


class TestShippedConfigs:
    CONFIG_DIR = __import__("pathlib").Path(__file__).parent.parent / "configs"

    def test_baseline_file_matches_defaults(self):
        from magnomech import load_config, resolve_system_params
        from magnomech.sweep import split_config

        config = load_config(self.CONFIG_DIR / "baseline.cfg")
        system, _, _ = split_config(config)
        assert resolve_system_params(system) == resolve_system_params({})

    def test_detuning_sweep_file_parses(self):
        from magnomech import load_config

        spec = sweep_spec_from_config(load_config(self.CONFIG_DIR / "detuning_sweep.cfg"))
        assert spec.axis1.name == "delta_m_tilde"
        assert spec.axis2.count == 33
        assert spec.measures == ("entanglement", "steering")

    def test_meanfield_point_runs(self):
        from magnomech import load_config

        report = run_point(load_config(self.CONFIG_DIR / "meanfield_point.cfg"))
        assert report.stable
        # derived couplings land in the operating decade
        g_m = report.params.G_m / TWO_PI
        g_c = report.params.G_c / TWO_PI
        assert 0.1e6 < g_m < 2e6
        assert 0.5e6 < g_c < 8e6
        assert report.entanglement("c", "a") > 0.0


class TestCli:
    def test_point_roundtrip(self, tmp_path, capsys):
        cfg = tmp_path / "point.cfg"
        cfg.write_text("temperature = 0.0\n")
        assert cli_main(["point", "--config", str(cfg)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["params"]["temperature"] == 0.0
        assert payload["report"]["stable"] is True
        assert payload["report"]["E_ca"] > 0.05

    def test_sweep_writes_file(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text(
            "axis1 = temperature\naxis1_start = 0\naxis1_stop = 0.1\n"
            "axis1_count = 2\nmeasures = entanglement\n"
        )
        out = tmp_path / "out.csv"
        assert cli_main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
        assert out.read_text().startswith("temperature_K,")

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("bogus_key = 1\n")
        assert cli_main(["point", "--config", str(cfg)]) == 1
        assert "bogus_key" in capsys.readouterr().err

    def test_missing_file_exit_code(self, tmp_path):
        assert cli_main(["point", "--config", str(tmp_path / "nope.cfg")]) == 1

    def test_presets_listing(self, capsys):
        assert cli_main(["presets"]) == 0
        out = capsys.readouterr().out
        assert "detuning-grid" in out and "contrast-temperature" in out

    def test_preset_requires_out(self, capsys):
        assert cli_main(["presets", "--preset", "detuning-grid"]) == 1

    def test_unknown_preset(self, tmp_path):
        code = cli_main(
            ["presets", "--preset", "nope", "--out", str(tmp_path / "x.csv")]
        )
        assert code == 1

    def test_preset_run(self, tmp_path):
        out = tmp_path / "preset.csv"
        code = cli_main(
            ["presets", "--preset", "temperature-baseline", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 42  # header + 41 grid points
