import json
import math

import numpy as np
import pytest

from abwire import __version__
from abwire.cli import main, parse_header, read_config


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_params_mode(capsys):
    code, out, _ = run(capsys, "params", "--beta", "0.5", "--gamma", "5.1")
    assert code == 0
    assert "beta = 0.5" in out and "coupling = 26.26" in out


def test_physical_mode_prints_consistent_triple(capsys):
    code, out, _ = run(capsys, "params", "--alpha", "1e-39", "--B", "5", "--M0", "1e-25",
                       "--rho0", "1e-3", "--E-field", "1e7")
    assert code == 0
    vals = dict(line.split(" = ") for line in out.splitlines())
    beta, gamma, eps = (float(vals[k]) for k in ("beta", "gamma", "epsilon"))
    assert eps * gamma ** 2 == pytest.approx(beta ** 2, rel=1e-10)


def test_channels_mode(capsys):
    code, out, _ = run(capsys, "channels", "--beta", "0.5", "--gamma", "5.1")
    assert code == 0
    assert "m_minus = 4" in out and "m_plus = 5" in out and "absorbed_count = 10" in out


def test_smatrix_mode(capsys):
    code, out, _ = run(capsys, "smatrix", "--beta", "0", "--gamma", str(math.sqrt(3) / 2),
                       "--wire", "reflecting", "--a", "1.0", "--m-min", "1", "--m-max", "1")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert float(row[5]) == pytest.approx(math.pi / 4 - 1.0, abs=1e-10)


def test_scan_table(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--beta", "0.5", "--gamma", "5.1", "--n-points", "100",
                     "-o", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 101
    assert lines[0].split(" # ")[0] == "phi,y,re_f,im_f,re_f_abmod,im_f_abmod,re_f_w,im_f_w,tail_bound"
    assert f"abwire={__version__}" in lines[0]
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data.shape == (100, 9)
    assert all(len(v.split("e")[0].replace("-", "").replace(".", "")) <= 12 for v in lines[1].split(","))


def test_scan_deterministic_and_round_trip(tmp_path, capsys):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    args = ["scan", "--beta", "0.3", "--gamma", "2.0", "--n-points", "20", "--grid", "log",
            "--phi-min", "0.001"]
    assert run(capsys, *args, "-o", str(a))[0] == 0
    assert run(capsys, *args, "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(capsys, "scan", "--config", str(a), "-o", str(c))[0] == 0
    assert a.read_bytes() == c.read_bytes()
    meta = parse_header(a.read_text().splitlines()[0])
    assert meta["grid"] == "log" and float(meta["beta"]) == 0.3


def test_scan_p_invariance(tmp_path, capsys):
    ys = []
    for p in ("0.5", "2.0"):
        out = tmp_path / f"p{p}.csv"
        run(capsys, "scan", "--beta", "0.5", "--gamma", "5.1", "--n-points", "30", "--p", p,
            "-o", str(out))
        ys.append(np.loadtxt(out, delimiter=",", skiprows=1)[:, 1])
    assert np.allclose(ys[0], ys[1], rtol=1e-11, atol=0)


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nbeta = 0.5\ngamma = 5.1\nn_points = 4\n")
    assert read_config(str(cfg))["n-points"] == "4"
    code, out, _ = run(capsys, "scan", "--config", str(cfg), "--n-points", "6")
    assert code == 0
    assert len(out.splitlines()) == 7


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "scan", "--gamma", "1")[0] == 2
    assert run(capsys, "scan", "--beta", "0", "--gamma", "1", "--phi-min", "2", "--phi-max", "1")[0] == 2
    assert run(capsys, "scan", "--beta", "0", "--gamma", "-1")[0] == 2
    assert run(capsys, "scan", "--beta", "0", "--gamma", "1", "--wire", "reflecting", "--a", "1")[0] == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 1\n")
    assert run(capsys, "params", "--config", str(bad))[0] == 2
    code, _, err = run(capsys, "scan", "--beta", "0.5", "--gamma", "5.1", "--tol", "1e-14",
                       "--accel", "none", "--m-cap", "300", "--n-points", "3")
    assert code == 3 and "phi=" in err
    code, _, _ = run(capsys, "scan", "--beta", "0", "--gamma", "1", "-o",
                     str(tmp_path / "missing" / "x.csv"))
    assert code == 4
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--wire", "bogus"])
    assert exc.value.code == 2


def test_figure_a(tmp_path, capsys):
    code, out, _ = run(capsys, "figure", "a", "--output-dir", str(tmp_path), "--n-points", "120",
                       "--plot")
    assert code == 0
    for beta in ("0", "0.5"):
        head = (tmp_path / f"figure_a_beta{beta}.csv").read_text().splitlines()[0]
        assert f"beta={float(beta)!r}" in head and "gamma=5.1" in head
    summary = json.loads((tmp_path / "figure_a_summary.json").read_text())
    assert summary["gamma"] == 5.1 and summary["phi_star"] > 0
    assert (tmp_path / "figure_a.svg").read_text().lstrip().startswith("<?xml")
    assert "phi_star" in out
