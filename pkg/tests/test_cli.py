import json
import subprocess
import sys
from pathlib import Path

import pytest

from advlab.cli import main
from advlab.codespace import read_code


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def hamfile(tmp_path, capsys):
    path = tmp_path / "ham.txt"
    assert run(["gen", "hamming74", "-o", path], capsys)[0] == 0
    return path


# -- gen -----------------------------------------------------------------------


def test_gen_repetition(tmp_path, capsys):
    path = tmp_path / "rep.txt"
    assert run(["gen", "repetition", "--n", 5, "-o", path], capsys)[0] == 0
    assert read_code(path).as_strings() == ["00000", "11111"]


def test_gen_hamming_weights(hamfile):
    code = read_code(hamfile)
    assert code.M == 16
    assert {w.count("1") for w in code.as_strings()} == {0, 3, 4, 7}


def test_gen_random_is_seeded(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (a, b):
        assert run(["gen", "random", "--n", 10, "--M", 20, "--seed", 4, "-o", p], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert read_code(a).M == 20


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "random", "--n", 8, "--M", 300],
        ["gen", "random", "--n", 8],
        ["gen", "repetition"],
        ["gen", "hamming74", "--n", 8],
        ["gen", "bogus", "--n", 3],
    ],
)
def test_gen_usage_errors(tmp_path, capsys, argv):
    with pytest.raises(SystemExit) as ei:
        code = main([str(a) for a in argv] + ["-o", str(tmp_path / "x.txt")])
        raise SystemExit(code)
    assert ei.value.code == 1


# -- analyze ---------------------------------------------------------------------


def test_analyze_json(hamfile, capsys):
    code, out, _ = run(["analyze", hamfile, "--json", "--p", 0.2, "--epsilon", 0.25], capsys)
    assert code == 0
    r = json.loads(out)
    assert r["dual_distance"] == 4
    assert r["plotkin_average"]["exact"] == "7/2"  # meets n/2
    assert r["distance_distribution"] == ["1", "0", "0", "7", "7", "0", "0", "1"]
    assert r["pless_r2"]["equal"] and r["pless_r2"]["applies"]
    assert r["mass_beyond"]["0.2"]["L"]["exact"] == "15"
    assert "concentration_tail" in r


def test_analyze_text(hamfile, capsys):
    code, out, _ = run(["analyze", hamfile], capsys)
    assert code == 0
    assert "dual distance    : 4" in out


def test_analyze_repetition_dual_distance(tmp_path, capsys):
    path = tmp_path / "r.txt"
    path.write_text("000\n111\n")
    r = json.loads(run(["analyze", path, "--json"], capsys)[1])
    assert r["dual_distance"] == 2
    assert r["plotkin_average"]["exact"] == "3/2"


@pytest.mark.parametrize("text", ["000\n000\n", "000\n11\n", "0a0\n", "# only a comment\n"])
def test_analyze_bad_file(tmp_path, capsys, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    code, _, err = run(["analyze", path], capsys)
    assert code == 2 and err


def test_analyze_missing_file(tmp_path, capsys):
    assert run(["analyze", tmp_path / "nope.txt"], capsys)[0] == 2


def test_analyze_emit_round_trip(hamfile, tmp_path, capsys):
    emitted = tmp_path / "again.txt"
    assert run(["analyze", hamfile, "--emit", emitted], capsys)[0] == 0
    assert read_code(emitted) == read_code(hamfile)
    again = tmp_path / "third.txt"
    run(["analyze", emitted, "--emit", again], capsys)
    assert again.read_bytes() == emitted.read_bytes()


# -- simulate ---------------------------------------------------------------------


def test_simulate_strong_low_p_uses_bsc(hamfile, capsys):
    code, out, _ = run(["simulate", hamfile, "--adversary", "strong", "--p", 0.2, "--trials", 200], capsys)
    assert code == 0
    r = json.loads(out)
    assert r["strategy"]["kind"] == "bsc"
    assert r["diagnostics"]["branch"] == "bsc-low-p"
    assert sum(r["weight_histogram"].values()) == 200
    assert set(r["strong_limit_freq"]) == {"0.01", "0.05", "0.1"}
    assert "weak_limit" in r


def test_simulate_strong_high_p_on_hamming(hamfile, capsys):
    # only the complement lies beyond 2pn = 4.2, ratio 1/16 < c
    r = json.loads(run(["simulate", hamfile, "--adversary", "strong", "--p", 0.3, "--trials", 50], capsys)[1])
    assert r["diagnostics"]["branch"] == "confuser"
    # 2pn = 3.64: eight partners beyond it, so the skewed BSC branch
    r = json.loads(run(["simulate", hamfile, "--adversary", "strong", "--p", 0.26, "--trials", 50], capsys)[1])
    assert r["diagnostics"]["branch"] == "bsc-skewed"


@pytest.mark.parametrize(
    "extra",
    [
        ["--adversary", "bsc", "--p", 0.1, "--trials", 0],
        ["--adversary", "bsc", "--trials", 10],
        ["--adversary", "bsc", "--p", 1.5, "--trials", 10],
        ["--adversary", "strong", "--p", 0.3, "--c", 1.0, "--trials", 10],
        ["--adversary", "bsc", "--p", 0.1, "--trials", 10, "--workers", 0],
    ],
)
def test_simulate_usage_errors(hamfile, capsys, extra):
    assert run(["simulate", hamfile] + extra, capsys)[0] == 1


def test_simulate_histogram_plot(hamfile, tmp_path, capsys):
    fig = tmp_path / "hist.svg"
    argv = ["simulate", hamfile, "--adversary", "bsc", "--p", 0.1, "--trials", 100, "--histogram-plot", fig]
    assert run(argv, capsys)[0] == 0
    assert fig.read_text().lstrip().startswith("<?xml")


@pytest.mark.slow
def test_simulate_confuser_error_rate(hamfile, capsys):
    r = json.loads(run(["simulate", hamfile, "--adversary", "confuser", "--trials", 100_000, "--seed", 3], capsys)[1])
    # exact value 37/64
    assert r["avg_error_rate"] >= 0.4375 - 0.01
    assert abs(r["avg_error_rate"] - 37 / 64) < 0.01


def test_simulate_worker_counts_identical(hamfile, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ADVLAB_THREADS", "2")
    outs = []
    for w in ("1", "2"):
        path = tmp_path / f"w{w}.json"
        argv = ["simulate", hamfile, "--adversary", "strong", "--p", 0.3, "--trials", 3000, "--seed", 9,
                "--workers", w, "-o", path]
        assert run(argv, capsys)[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


# -- bounds -------------------------------------------------------------------------


def test_bounds_csv_and_svg(tmp_path, capsys):
    csv, svg = tmp_path / "curve.csv", tmp_path / "curve.svg"
    code, out, _ = run(["bounds", "-o", csv, "--svg", svg], capsys)
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "p,bsc_capacity,strong_adv_upper"
    assert len(lines) == 502
    assert lines[-1].startswith("0.5")
    erasure = (tmp_path / "curve_erasure.csv").read_text().splitlines()
    assert erasure[0] == "p,erasure_upper"
    summary = json.loads(out)
    assert summary["rows"] == 501 and summary["nonincreasing_above_knee"]
    assert "<svg" in svg.read_text()


def test_bounds_svg_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (a, b):
        run(["bounds", "--grid", 0.01, "-o", tmp_path / "c.csv", "--svg", path], capsys)
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("grid", [0, -0.1, 0.6])
def test_bounds_bad_grid(tmp_path, capsys, grid):
    assert run(["bounds", "--grid", grid, "-o", tmp_path / "c.csv"], capsys)[0] == 1


# -- lp -------------------------------------------------------------------------------


def test_lp_classical(capsys):
    code, out, _ = run(["lp", "--classical", "--n", 7, "--d", 3], capsys)
    assert code == 0
    r = json.loads(out)
    assert r["bound"] == pytest.approx(16, abs=1e-6)
    assert r["certificate_valid"] and r["exact"]
    assert len(r["f_coeffs"]) == 7


def test_lp_skew_certified(tmp_path, capsys):
    path = tmp_path / "lp.json"
    assert run(["lp", "--n", 24, "--p", 0.3, "--c", 0.5, "-o", path], capsys)[0] == 0
    r = json.loads(path.read_text())
    assert r["bound"] == pytest.approx(2359296 / 35)
    assert r["t"] == 14 and r["beta_positive"]
    assert r["closed_form_comparison"] == pytest.approx(0.11408753958953, abs=1e-12)


def test_lp_skew_degenerate_exits_solver(capsys):
    code, out, err = run(["lp", "--n", 24, "--p", 0.3, "--c", 0.1], capsys)
    assert code == 3
    r = json.loads(out)
    assert r["status"] == "optimal" and r["bound"] is None
    assert not r["certificate_valid"]
    assert "beta" in err


def test_lp_unbounded_exits_solver(capsys):
    code, out, _ = run(["lp", "--n", 24, "--p", 0.3, "--c", 0.9], capsys)
    assert code == 3 and json.loads(out)["status"] == "unbounded"


@pytest.mark.parametrize(
    "argv",
    [
        ["lp", "--n", 24, "--p", 0.2, "--c", 0.1],
        ["lp", "--n", 24, "--p", 0.3],
        ["lp", "--classical", "--n", 7],
        ["lp", "--classical", "--n", 7, "--d", 9],
        ["lp", "--p", 0.3, "--c", 0.1],
    ],
)
def test_lp_usage_errors(capsys, argv):
    assert run(argv, capsys)[0] == 1


# -- entry points ------------------------------------------------------------------------


def test_version_and_help():
    r = subprocess.run([sys.executable, "-m", "advlab", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("advlab ")
    r = subprocess.run([sys.executable, "-m", "advlab", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    for sub in ("gen", "analyze", "simulate", "bounds", "lp"):
        assert sub in r.stdout


def test_missing_subcommand_exits_usage():
    r = subprocess.run([sys.executable, "-m", "advlab"], capture_output=True, text=True)
    assert r.returncode == 1
