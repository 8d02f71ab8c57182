"""Command line entry points."""

import json

import pytest

from pinchest import cli


def test_run_writes_a_csv(tmp_path, capsys):
    out = tmp_path / "run.csv"
    code = cli.main(["run", "--trials", "2", "--methods", "LS", "--seed", "3",
                     "--out", str(out), "--power-dbm", "40"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "sweep_value,method,mean_nmse,mean_rate,trials,seed"
    assert len(lines) == 2
    assert lines[1].endswith(",2,3")
    captured = capsys.readouterr().out
    assert "LS" in captured and str(out) in captured


def test_run_defaults_to_the_first_configured_power(tmp_path):
    out = tmp_path / "run.csv"
    cli.main(["run", "--trials", "1", "--methods", "LS", "--out", str(out)])
    value = out.read_text().splitlines()[1].split(",")[0]
    assert float(value) == 0.0


def test_sweep_power_covers_all_points(tmp_path):
    out = tmp_path / "sweep.csv"
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({
        "trials": 1,
        "pilot_powers_dbm": [0.0, 40.0],
        "methods": ["PerfectCSI"],
    }))
    code = cli.main(["sweep-power", "--config", str(config), "--out", str(out)])
    assert code == 0
    rows = out.read_text().splitlines()[1:]
    assert [float(r.split(",")[0]) for r in rows] == [0.0, 40.0]


def test_sweep_subarray_accepts_a_power_override(tmp_path):
    out = tmp_path / "splits.csv"
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({
        "trials": 1,
        "subarray_splits": [[20, 40], [40, 20]],
        "methods": ["PerfectCSI"],
    }))
    code = cli.main(["sweep-subarray", "--config", str(config),
                     "--power-dbm", "20", "--out", str(out)])
    assert code == 0
    rows = out.read_text().splitlines()[1:]
    assert [r.split(",")[0] for r in rows] == ["20-40", "40-20"]


def test_cli_overrides_beat_the_config_file(tmp_path):
    out = tmp_path / "o.csv"
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"trials": 50, "base_seed": 1,
                                  "methods": ["LS", "Refined"]}))
    cli.main(["run", "--config", str(config), "--trials", "1", "--seed", "12",
              "--methods", "LS", "--out", str(out)])
    row = out.read_text().splitlines()[1]
    assert row.endswith(",1,12")


def test_unknown_method_is_rejected():
    with pytest.raises(ValueError, match="unknown methods"):
        cli.main(["run", "--trials", "1", "--methods", "Bogus", "--out", "x.csv"])


def test_missing_command_exits():
    with pytest.raises(SystemExit):
        cli.main([])
