from pathlib import Path

import pytest

from wsansim import cli
from wsansim.formats import parse_summary, read_trace_csv

GOLDEN = Path(__file__).parent / "golden"


def test_stats_builtin(capsys):
    assert cli.main(["stats", "--loss-table", "builtin:samples_10m"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["distance_m,count,mean,min,max", "10,15,0.5465,0.1358,0.9259"]


def test_stats_missing_file(tmp_path, capsys):
    assert cli.main(["stats", "--loss-table", str(tmp_path / "nope.csv")]) == 2
    assert "I/O error" in capsys.readouterr().err


def test_stats_bad_table(tmp_path, capsys):
    p = tmp_path / "t.csv"
    p.write_text("distance_m,loss_rate\n5,1.5\n")
    assert cli.main(["stats", "--loss-table", str(p)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_validate_ok(capsys):
    assert cli.main(["validate", "--scenario", "builtin:mobile_10m"]) == 0
    assert "1500 steps" in capsys.readouterr().out


def test_validate_overlapping_segments(tmp_path, capsys):
    text = (GOLDEN / "all_loss.scn").read_text().replace(
        "mobility.segments = 0:2:0", "mobility.segments = 0:1.5:0, 1:2:5"
    )
    p = tmp_path / "s.scn"
    p.write_text(text)
    (tmp_path / "all_loss.csv").write_text((GOLDEN / "all_loss.csv").read_text())
    assert cli.main(["validate", "--scenario", str(p)]) == 1
    assert "mobility.segments" in capsys.readouterr().err


def test_missing_scenario_is_io_error(tmp_path):
    assert cli.main(["validate", "--scenario", str(tmp_path / "x.scn")]) == 2


def test_run_golden(tmp_path):
    assert cli.main(["run", "--scenario", str(GOLDEN / "all_loss.scn"), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "trace.csv").read_bytes() == (GOLDEN / "all_loss_trace.csv").read_bytes()
    assert (tmp_path / "summary.txt").read_bytes() == (GOLDEN / "all_loss_summary.txt").read_bytes()


def test_golden_content_is_the_fixed_point():
    recs = read_trace_csv((GOLDEN / "all_loss_trace.csv").read_text())
    assert len(recs) == 100
    assert all(r.u == 0.0 and r.y == 0.0 and r.lost and r.predicted for r in recs)
    j = 0.0
    for r in recs:
        j += abs(r.r) * 0.02
        assert r.iae == j


def test_run_overrides_echoed(tmp_path):
    argv = ["run", "--scenario", "builtin:mobile_10m", "--out", str(tmp_path),
            "--seed", "17", "--compensate", "off"]
    assert cli.main(argv) == 0
    kv = parse_summary((tmp_path / "summary.txt").read_text())
    assert kv["sim.seed"] == "17" and kv["seed"] == "17"
    assert kv["sim.compensate"] == "off"
    assert kv["predictions_made"] == "0"
    recs = read_trace_csv((tmp_path / "trace.csv").read_text())
    assert float(kv["final_iae"]) == recs[-1].iae
    assert int(kv["packets_lost"]) == sum(r.lost for r in recs)


def test_out_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("WSANSIM_OUT", str(tmp_path / "env"))
    assert cli.main(["run", "--scenario", "builtin:pendulum_lossless"]) == 0
    assert (tmp_path / "env" / "trace.csv").exists()
    assert cli.main(["run", "--scenario", "builtin:pendulum_lossless", "--out", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "flag" / "summary.txt").exists()


def test_sweep_outputs(tmp_path, capsys):
    argv = ["sweep", "--scenario", "builtin:mobile_10m", "--seeds", "3", "--out", str(tmp_path)]
    assert cli.main(argv) == 0
    kv = parse_summary((tmp_path / "sweep_summary.txt").read_text())
    assert kv["seeds"] == "3"
    assert float(kv["ratio_of_medians"]) == pytest.approx(
        float(kv["compensated.median_iae"]) / float(kv["uncompensated.median_iae"])
    )
    rows = (tmp_path / "sweep.csv").read_text().splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == ["1", "2", "3"]


def test_bad_subcommand():
    with pytest.raises(SystemExit):
        cli.main(["fly"])
