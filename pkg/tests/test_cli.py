import subprocess
import sys

import pytest

from msgate.cli import UsageError, build_parser, main, read_config, resolve


def test_periods_line(capsys):
    assert main(["periods"]) == 0
    line = capsys.readouterr().out
    assert "14790.7" in line and "12566.37" in line


def test_fig4b_independent_of_alpha(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["fig4b", "--alpha", "0.5", "--out", str(a)]) == 0
    assert main(["fig4b", "--alpha", "2.0", "--out", str(b)]) == 0
    ra = [list(map(float, r.split(","))) for r in a.read_text().splitlines()[1:]]
    rb = [list(map(float, r.split(","))) for r in b.read_text().splitlines()[1:]]
    assert a.read_text().splitlines()[0] == "n_th,F_toy"
    assert max(abs(x[1] - y[1]) for x, y in zip(ra, rb)) <= 1e-9


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--param", "dnu", "--values", "0.05,0.02,0.03", "--no-numeric"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = a.read_text().splitlines()
    assert rows[0] == "param_value,t0_numeric,t0_closed,t_ms"
    assert [float(r.split(",")[0]) for r in rows[1:]] == [0.02, 0.03, 0.05]


def test_usage_errors_exit_2():
    assert main(["fig1", "--n-th", "0.5"]) == 2
    assert main(["sweep", "--param", "nu"]) == 2
    assert main(["fig2", "--omega", "-1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_numerical_error_exit_1(capsys):
    # a step this coarse makes the integrator diverge
    assert main(["periods", "--dt", "0.6"]) == 1
    assert "IntegrationDivergedError" in capsys.readouterr().err


def test_config_precedence(tmp_path, monkeypatch):
    conf = tmp_path / "run.conf"
    conf.write_text("# test\nomega = 0.2\nphonon_dim = 6\n")
    parser = build_parser()
    opts = resolve(parser.parse_args(["fig2", "--config", str(conf), "--omega", "0.3"]))
    assert opts["omega"] == 0.3 and opts["phonon-dim"] == 6 and opts["nu"] == 5.0
    monkeypatch.setenv("MSGATE_CONFIG", str(conf))
    assert resolve(parser.parse_args(["fig2"]))["omega"] == 0.2
    conf.write_text("bogus = 1\n")
    with pytest.raises(UsageError):
        read_config(conf)


def test_fig4a_csv(tmp_path):
    out = tmp_path / "a.csv"
    assert main(["fig4a", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,abs_c0_sq,abs_c1_sq"
    assert lines[1] == "0,1,0"


def test_plot_writes_svg(tmp_path):
    pytest.importorskip("matplotlib")
    svg = tmp_path / "f.svg"
    assert main(["fig4a", "--out", str(tmp_path / "a.csv"), "--plot", str(svg)]) == 0
    assert svg.read_text().lstrip().startswith("<?xml")


def test_console_entry_point_runs():
    r = subprocess.run([sys.executable, "-m", "msgate.cli", "fig4b", "--n-th", "0,0.5"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.splitlines()[0] == "n_th,F_toy"
    assert len(r.stdout.splitlines()) == 3


@pytest.mark.slow
def test_fig1_period(tmp_path):
    out = tmp_path / "fig1.csv"
    r = subprocess.run([sys.executable, "-m", "msgate.cli", "fig1", "--out", str(out)],
                       capture_output=True, text=True, check=True)
    T = float(r.stderr.split()[-1])
    assert abs(T / 14608 - 1) < 0.01
    assert out.read_text().splitlines()[0].startswith("t,prob_gg,prob_ge,prob_eg,prob_ee,norm")
