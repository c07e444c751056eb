import csv
from dataclasses import replace

import numpy as np
import pytest

from starvlc import DetectorScheme, OrientedPoint
from starvlc.cli import (
    ConfigError,
    SweepSpec,
    default_scenario,
    dump_beta,
    load_scenario,
    load_sweep_spec,
    main,
    no_ris_rate_ue1,
    parse_kv_file,
    run_sweep,
    scenario_at,
    sweep_values,
    write_scenario,
)
from starvlc.spca import Objective, SpcaConfig
from util import reference_scenario

FAST = SpcaConfig()


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestKvParsing:
    def test_basic_file(self, tmp_path):
        p = tmp_path / "cfg.txt"
        p.write_text("# comment\n\nue1.position = [3.0, 2.5, 1.0]\n"
                     "power.ue1 = 0.05\nsweep.scheme = sud\n")
        entries = parse_kv_file(p)
        assert entries["ue1.position"] == [3.0, 2.5, 1.0]
        assert entries["power.ue1"] == 0.05
        assert entries["sweep.scheme"] == "sud"

    def test_malformed_line_reports_lineno(self, tmp_path):
        p = tmp_path / "cfg.txt"
        p.write_text("good = 1\nbad line without equals\n")
        with pytest.raises(ConfigError, match=":2:"):
            parse_kv_file(p)

    def test_empty_key_rejected(self, tmp_path):
        p = tmp_path / "cfg.txt"
        p.write_text(" = 5\n")
        with pytest.raises(ConfigError):
            parse_kv_file(p)


class TestScenarioRoundTrip:
    def test_default_round_trip(self, tmp_path):
        sc = default_scenario()
        path = tmp_path / "scenario.txt"
        write_scenario(sc, path)
        assert load_scenario(path) == sc

    def test_modified_round_trip(self, tmp_path):
        sc = default_scenario()
        sc = replace(sc, p1=0.037,
                     ue1=OrientedPoint([3.1, 2.2, 1.0], [0.0, 0.0, 1.0]),
                     panel=replace(sc.panel, rows=4, cols=5, pitch=0.07))
        path = tmp_path / "scenario.txt"
        write_scenario(sc, path)
        assert load_scenario(path) == sc

    def test_partial_file_uses_defaults(self, tmp_path):
        path = tmp_path / "scenario.txt"
        path.write_text("power.ue1 = 0.02\n")
        sc = load_scenario(path)
        assert sc.p1 == 0.02
        assert sc.p2 == default_scenario().p2

    def test_invalid_scenario_is_config_error(self, tmp_path):
        path = tmp_path / "scenario.txt"
        path.write_text("power.ue1 = -1.0\n")
        with pytest.raises(ConfigError):
            load_scenario(path)


class TestSweepSpec:
    def test_load(self, tmp_path):
        path = tmp_path / "sweep.txt"
        path.write_text("sweep.parameter = ue1_x\nsweep.start = 3.0\n"
                        "sweep.stop = 4.5\nsweep.steps = 4\n"
                        "sweep.scheme = sud\nsweep.mode = ms\n")
        spec = load_sweep_spec(path)
        assert spec.parameter == "ue1_x"
        assert spec.steps == 4
        assert spec.scheme is DetectorScheme.SUD
        assert spec.mode == "ms"

    def test_missing_key(self, tmp_path):
        path = tmp_path / "sweep.txt"
        path.write_text("sweep.parameter = ue1_x\n")
        with pytest.raises(ConfigError):
            load_sweep_spec(path)

    def test_validation(self):
        sc = default_scenario()
        with pytest.raises(ConfigError):
            SweepSpec(parameter="nope", start=0, stop=1, steps=3, scenario=sc)
        with pytest.raises(ConfigError):
            SweepSpec(parameter="ue1_x", start=2.0, stop=1.0, steps=3, scenario=sc)
        with pytest.raises(ConfigError):
            SweepSpec(parameter="ue1_x", start=0.0, stop=1.0, steps=1, scenario=sc)

    def test_element_count_snaps_to_cols(self):
        spec = SweepSpec(parameter="element_count", start=10, stop=80, steps=10,
                         scenario=default_scenario())
        values = sweep_values(spec)
        assert all(v % 8 == 0 for v in values)
        assert values == sorted(set(values))

    def test_scenario_at(self):
        sc = default_scenario()
        spec = SweepSpec(parameter="ue2_x", start=5.5, stop=9.0, steps=3, scenario=sc)
        moved = scenario_at(spec, 7.0)
        assert moved.ue2.position[0] == 7.0
        spec = SweepSpec(parameter="power_both", start=0.01, stop=0.1, steps=3, scenario=sc)
        powered = scenario_at(spec, 0.05)
        assert powered.p1 == powered.p2 == 0.05
        spec = SweepSpec(parameter="element_count", start=8, stop=80, steps=3, scenario=sc)
        resized = scenario_at(spec, 16)
        assert resized.panel.rows == 2 and resized.panel.cols == 8


def small_sweep_scenario():
    sc = default_scenario()
    return replace(sc, panel=replace(sc.panel, rows=2, cols=3))


class TestRunSweep:
    def test_position_sweep_outputs(self, tmp_path):
        spec = SweepSpec(parameter="ue1_x", start=3.0, stop=4.0, steps=3,
                         scenario=small_sweep_scenario(), oracle_check=True)
        ok = run_sweep(spec, tmp_path, seed=7)
        assert ok
        rows = read_csv(tmp_path / "sweep.csv")
        assert rows[0] == ["swept_value", "r1", "r2", "sum_rate", "ee", "iters",
                           "converged", "oracle_sum", "oracle_gap"]
        assert len(rows) == 4
        gaps = [abs(float(r[8])) for r in rows[1:]]
        assert max(gaps) < 1e-3
        baseline = read_csv(tmp_path / "no_ris.csv")
        assert baseline[0] == ["swept_value", "r1_no_ris"]
        assert len(baseline) == 4
        manifest = parse_kv_file(tmp_path / "manifest.txt")
        assert manifest["sweep.parameter"] == "ue1_x"
        assert manifest["seed"] == 7
        assert "tool.version" in manifest

    def test_byte_identical_reruns(self, tmp_path):
        spec = SweepSpec(parameter="power_both", start=0.01, stop=0.05, steps=3,
                         scenario=small_sweep_scenario())
        run_sweep(spec, tmp_path / "a", seed=1)
        run_sweep(spec, tmp_path / "b", seed=1)
        a = (tmp_path / "a" / "sweep.csv").read_bytes()
        b = (tmp_path / "b" / "sweep.csv").read_bytes()
        assert a == b

    def test_degenerate_two_point_sweep(self, tmp_path):
        # Two identical sweep points produce two identical result rows.
        sc = small_sweep_scenario()
        spec = SweepSpec(parameter="power_both", start=0.05, stop=0.05, steps=2,
                         scenario=sc)
        run_sweep(spec, tmp_path)
        rows = read_csv(tmp_path / "sweep.csv")
        assert rows[1] == rows[2]

    def test_power_sweep_notes_zero_exclusion(self, tmp_path):
        spec = SweepSpec(parameter="power_both", start=0.001, stop=0.1, steps=2,
                         scenario=small_sweep_scenario())
        run_sweep(spec, tmp_path)
        manifest = parse_kv_file(tmp_path / "manifest.txt")
        assert "note" not in manifest


class TestNoRisBaseline:
    def test_matches_manual_formula(self):
        from starvlc import channel_set, rate

        sc = small_sweep_scenario()
        bare = replace(sc, panel=replace(sc.panel, rows=0))
        ch = channel_set(bare)
        expected = rate((0.7 * ch.h_los * sc.p1) ** 2 / sc.noise_variance)
        assert no_ris_rate_ue1(sc) == pytest.approx(expected, rel=1e-14)


class TestDumpBeta:
    def test_matrix_shape_and_values(self, tmp_path):
        sc = small_sweep_scenario()
        out = tmp_path / "beta.csv"
        matrix = dump_beta(sc, DetectorScheme.SIC, out, mode="ms")
        assert matrix.shape == (2, 3)
        rows = read_csv(out)
        assert len(rows) == 2 and len(rows[0]) == 3
        parsed = np.array([[float(v) for v in row] for row in rows])
        np.testing.assert_array_equal(parsed, matrix)
        assert set(np.unique(parsed)) <= {0.0, 1.0}


class TestCliEntry:
    def test_solve_writes_outputs(self, tmp_path, capsys):
        cfg = tmp_path / "scenario.txt"
        write_scenario(small_sweep_scenario(), cfg)
        code = main(["solve", "--scenario", str(cfg), "--scheme", "sic",
                     "--out", str(tmp_path / "out")])
        assert code == 0
        assert (tmp_path / "out" / "solution.csv").exists()
        assert (tmp_path / "out" / "beta.csv").exists()
        assert (tmp_path / "out" / "manifest.txt").exists()
        assert "sum=" in capsys.readouterr().out

    def test_oracle_command(self, tmp_path, capsys):
        cfg = tmp_path / "scenario.txt"
        write_scenario(small_sweep_scenario(), cfg)
        code = main(["oracle", "--scenario", str(cfg), "--out", str(tmp_path / "out")])
        assert code == 0
        rows = read_csv(tmp_path / "out" / "oracle.csv")
        assert rows[0][0] == "sum_rate"
        assert int(rows[1][3]) == 2**6

    def test_scan_command(self, tmp_path):
        cfg = tmp_path / "scenario.txt"
        write_scenario(small_sweep_scenario(), cfg)
        code = main(["scan", "--scenario", str(cfg), "--grid-points", "11",
                     "--out", str(tmp_path / "out")])
        assert code == 0
        rows = read_csv(tmp_path / "out" / "scan.csv")
        assert len(rows) == 7  # header + 6 elements
        assert len(rows[0]) == 2 + 11

    def test_sweep_command(self, tmp_path):
        spec_file = tmp_path / "sweep.txt"
        spec_file.write_text("sweep.parameter = power_both\nsweep.start = 0.01\n"
                             "sweep.stop = 0.05\nsweep.steps = 2\n"
                             "ris.rows = 2\nris.cols = 3\n")
        code = main(["sweep", str(spec_file), "--out", str(tmp_path / "out")])
        assert code == 0
        assert (tmp_path / "out" / "sweep.csv").exists()

    def test_config_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("power.ue1 = -5\n")
        code = main(["solve", "--scenario", str(bad)])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exit_code(self, tmp_path, capsys):
        code = main(["solve", "--scenario", str(tmp_path / "nope.txt")])
        assert code == 1
