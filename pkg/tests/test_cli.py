from __future__ import annotations

import subprocess
import sys

import pytest

from focused_macros.cli import main, parse_range

HANOI = ["--domain", "hanoi", "--disks", "3"]


def run(tmp_path, *argv):
    out = tmp_path / "out.csv"
    assert main([*argv, "--out", str(out)]) == 0
    return out.read_text()


def data_rows(text):
    return [line.split(",") for line in text.splitlines()[2:] if not line.startswith("#")]


def test_parse_range():
    assert parse_range("1-3,7") == [1, 2, 3, 7]
    assert parse_range("4") == [4]


def test_correlate_identity_rows(tmp_path):
    text = run(tmp_path, "correlate", "--N", "4", "--M", "2", "--kbar", "1-3", "--seeds", "2")
    assert text.startswith("# focused-macros correlate v1 N=4 M=2 seeds=2 seed=0\nkbar,pearson,spearman,samples\n")
    rows = data_rows(text)
    assert rows[0] == ["1", "1.000000", "1.000000", str(2 * 16**2)]
    assert [r[0] for r in rows] == ["1", "2", "3"]


def test_sweep_writes_summary_and_runs(tmp_path):
    runs = tmp_path / "runs.csv"
    text = run(tmp_path, "sweep", "--N", "6", "--M", "2", "--kbar", "1,5", "--seeds", "4", "--runs-out", str(runs))
    rows = data_rows(text)
    assert [r[:3] for r in rows] == [["1", "4", "4"], ["5", "4", "4"]]
    assert all(float(r[5]) <= 36 for r in rows[:1])
    per_run = data_rows(runs.read_text())
    assert len(per_run) == 8 and {r[2] for r in per_run} == {"1"}


def test_learn_and_plan_hanoi(tmp_path):
    lib = tmp_path / "lib.txt"
    rec = tmp_path / "rec.csv"
    assert main(["learn", *HANOI, "--N-M", "6", "--B-M", "3000", "--out", str(lib), "--records-out", str(rec)]) == 0
    head = lib.read_text().splitlines()[0]
    assert head == "macros v1 domain=hanoi3 N_M=6 R_M=1 B_M=3000 seed=0"
    assert rec.read_text().splitlines()[1] == "macro,length,effect_size"
    text = run(tmp_path, "plan", *HANOI, "--macros", "focused", "--library", str(lib), "--instances", "5")
    rows = data_rows(text)
    assert len(rows) == 5 and all(r[1] == "1" for r in rows)
    assert all(int(r[4]) >= int(r[3]) for r in rows)
    assert text.splitlines()[-1].startswith("# mean_generated=") and text.endswith("solve_rate=1.000\n")


def test_learn_zero_macros_writes_header_only(tmp_path):
    lib = tmp_path / "lib.txt"
    assert main(["learn", "--domain", "cube", "--N-M", "0", "--out", str(lib)]) == 0
    assert lib.read_text() == "macros v1 domain=cube N_M=0 R_M=1 B_M=1000000 seed=0\n"


def test_plan_footer_and_goal_sources(tmp_path):
    for goal in ("default", "random"):
        text = run(tmp_path, "plan", "--domain", "npuzzle", "--side", "3", "--instances", "4", "--goal", goal)
        assert f"goal={goal}" in text.splitlines()[0]
        assert all(r[1] == "1" for r in data_rows(text))


def test_strips_problem_file(tmp_path):
    from conftest import TOY_STRIPS

    problem = tmp_path / "toy.txt"
    problem.write_text(TOY_STRIPS)
    text = run(tmp_path, "plan", "--domain", "strips", "--problem", str(problem), "--instances", "3")
    assert data_rows(text)


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# correlate settings\nn=4\nm=2\nkbar=1\nseeds=1\n")
    text = run(tmp_path, "correlate", "--config", str(cfg))
    assert text.splitlines()[0] == "# focused-macros correlate v1 N=4 M=2 seeds=1 seed=0"
    text = run(tmp_path, "correlate", "--config", str(cfg), "--seeds", "2")
    assert "seeds=2" in text.splitlines()[0]


@pytest.mark.parametrize(
    "argv,cfg",
    [
        (["plan", "--domain", "cube", "--macros", "focused", "--library", "missing.txt"], None),
        (["learn", "--domain", "npuzzle", "--macros", "expert", "--out", "x"], None),
        (["learn", "--domain", "cube", "--R-M", "0", "--out", "x"], None),
        (["learn", "--domain", "strips", "--out", "x"], None),
        (["correlate", "--N", "4", "--kbar", "4"], None),
        (["correlate"], "bogus=1\n"),
        (["plan"], "macros=sometimes\n"),
        (["learn", "--domain", "cube", "--N-M", "4"], None),
    ],
)
def test_errors_exit_with_status_2(tmp_path, monkeypatch, capsys, argv, cfg):
    monkeypatch.chdir(tmp_path)
    if cfg is not None:
        (tmp_path / "c.cfg").write_text(cfg)
        argv = [*argv, "--config", "c.cfg"]
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("focused-macros: error:")


def test_library_for_another_domain_is_rejected(tmp_path, capsys):
    lib = tmp_path / "lib.txt"
    assert main(["learn", "--domain", "cube", "--N-M", "0", "--out", str(lib)]) == 0
    assert main(["plan", "--domain", "npuzzle", "--macros", "focused", "--library", str(lib)]) == 2
    assert "domain" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "focused_macros", "correlate", "--N", "3", "--kbar", "1", "--seeds", "1"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.splitlines()[2] == "1,1.000000,1.000000,64"
