import json

import pytest
from click.testing import CliRunner

from xychain.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def _data_rows(output):
    lines = [l for l in output.splitlines() if l and not l.startswith("#")]
    return [l.split(",") for l in lines[1:]]  # skip the column header


def test_point_small_field_ising(runner):
    res = runner.invoke(main, ["point", "--gamma", "1", "--h", "0.2", "--rmax", "5"])
    assert res.exit_code == 0
    rows = _data_rows(res.output)
    c = {int(row[2]): float(row[7]) for row in rows}
    assert c[1] == pytest.approx(0.0050375, abs=5e-6)
    assert c[2] == pytest.approx(1.25e-5, abs=5e-6)
    assert c[3] == c[4] == c[5] == 0.0


def test_point_factorized_is_separable(runner):
    res = runner.invoke(
        main, ["point", "--gamma", "0.5", "--eps", "0", "--rmax", "4"]
    )
    assert res.exit_code == 0
    assert "tau1=" in res.output
    for row in _data_rows(res.output):
        assert float(row[7]) == pytest.approx(0.0, abs=1e-8)


def test_point_isotropic_mz(runner):
    res = runner.invoke(main, ["point", "--gamma", "0", "--h", "0.7071", "--rmax", "3"])
    assert res.exit_code == 0
    mz = float(_data_rows(res.output)[0][6])
    assert mz == pytest.approx(0.25, abs=1e-4)


def test_point_usage_errors(runner):
    res = runner.invoke(main, ["point", "--gamma", "0.5"])
    assert res.exit_code == 2
    res = runner.invoke(
        main, ["point", "--gamma", "0.5", "--h", "1.0", "--eps", "0.1"]
    )
    assert res.exit_code == 2
    res = runner.invoke(main, ["point", "--gamma", "2.0", "--h", "1.0"])
    assert res.exit_code == 2


def test_scan_deterministic_and_parallel(runner, tmp_path):
    args = ["scan", "--gamma", "0.3,0.7", "--h", "0.5,1.5", "--rmax", "3"]
    a = runner.invoke(main, args + ["--jobs", "1"])
    b = runner.invoke(main, args + ["--jobs", "2"])
    assert a.exit_code == 0 and b.exit_code == 0
    strip = lambda out: [l for l in out.splitlines() if "jobs=" not in l]
    assert strip(a.output) == strip(b.output)
    assert len(_data_rows(a.output)) == 2 * 2 * 3


def test_scan_eps_grid(runner):
    res = runner.invoke(
        main,
        ["scan", "--gamma", "0.5", "--eps", "0.01,0.001", "--side", "above", "--rmax", "2"],
    )
    assert res.exit_code == 0
    assert len(_data_rows(res.output)) == 4


def test_figure3_vanishes_at_saturation(runner, tmp_path):
    out = tmp_path / "fig3.csv"
    res = runner.invoke(main, ["figure", "3", "--out", str(out)])
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# xychain")
    rows = [l.split(",") for l in lines if l and not l.startswith("#")][1:]
    # grid point at h=1 sits within one ulp of saturation, where C ~ sqrt(eps)
    near = [float(r[2]) for r in rows if float(r[0]) >= 1.0 - 1e-9]
    assert near and all(c <= 1e-7 for c in near)
    above = [float(r[2]) for r in rows if float(r[0]) > 1.001]
    assert above and all(c == 0.0 for c in above)


def test_figure_rejects_bad_index(runner):
    res = runner.invoke(main, ["figure", "7"])
    assert res.exit_code == 2


def test_range_command(runner):
    res = runner.invoke(main, ["range", "--gamma", "1", "--h", "0.5"])
    assert res.exit_code == 0
    assert "R = 2" in res.output


def test_xi2se_command(runner):
    res = runner.invoke(
        main, ["xi2se", "--gamma", "0.25", "--eps", "1e-4", "--side", "below"]
    )
    assert res.exit_code == 0
    assert "xi = " in res.output
    assert "analytic" in res.output


def test_accept_single_criterion(runner, tmp_path):
    report = tmp_path / "report.json"
    res = runner.invoke(main, ["accept", "--only", "pfeuty", "--out", str(report)])
    assert res.exit_code == 0
    data = json.loads(report.read_text())
    assert data["passed"] is True
    assert data["criteria"][0]["name"] == "pfeuty"


def test_accept_unknown_criterion(runner):
    res = runner.invoke(main, ["accept", "--only", "nonsense"])
    assert res.exit_code == 2
