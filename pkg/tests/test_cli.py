import subprocess
import sys

import pytest

from boxcast.cli import main
from boxcast.ingest import parse_wide_csv

WIDE = ("month,North,South\n"
        + "".join(f"{2012 + i // 12}-{i % 12 + 1:02d},{200 + i + (7 * i) % 5},{400 + 2 * i + (3 * i) % 7}\n"
                  for i in range(48)))


@pytest.fixture
def wide_file(tmp_path):
    path = tmp_path / "wide.csv"
    path.write_text(WIDE)
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_forecast_bundled(capsys):
    code, out, _ = run(["forecast", "--order", "1,1,0", "--horizon", "24"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 25
    assert lines[1].startswith("Jan-17,")
    assert len(lines[0].split(",")) == 13


def test_forecast_deterministic(capsys):
    argv = ["forecast", "--borough", "Barnet", "--horizon", "6"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


def test_out_file(tmp_path, wide_file, capsys):
    out_path = tmp_path / "f.csv"
    code, out, _ = run(["forecast", "--input", wide_file, "--order", "0,1,1",
                        "--horizon", "3", "--out", str(out_path)], capsys)
    assert code == 0 and out == ""
    raw = parse_wide_csv(out_path.read_text())
    assert raw.header == ("North-Model Forecast", "North-Model UCL", "North-Model LCL",
                          "South-Model Forecast", "South-Model UCL", "South-Model LCL")
    assert len(raw.rows) == 3


def test_fit_and_select(wide_file, capsys):
    code, out, _ = run(["fit", "--input", wide_file, "--borough", "North", "--order", "1,0,0"], capsys)
    assert code == 0 and "North-Model" in out and "ARIMA(1,0,0)" in out
    code, out, _ = run(["select", "--input", wide_file, "--borough", "South"], capsys)
    assert code == 0 and len(out.splitlines()) > 10


def test_report_markdown(capsys):
    code, out, _ = run(["report", "--borough", "Bexley", "--order", "2,0,0",
                        "--format", "markdown", "--horizon", "3"], capsys)
    assert code == 0
    assert "Bexley-Model" in out and "Bexley-SES" in out
    assert "| Jan-17 |" in out


def test_backtest(capsys):
    code, out, _ = run(["backtest", "--borough", "Brent", "--order", "1,0,0",
                        "--train-end", "2015-12"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "borough,order,train_end,holdout_months,coverage_pct,within_20pct,mape"
    assert out.splitlines()[1].startswith('Brent,"ARIMA(1,0,0)",2015-12,12,')


def test_plot_writes_files(tmp_path, capsys):
    code, out, _ = run(["plot", "--order", "1,1,0", "--horizon", "12", "--out", str(tmp_path)], capsys)
    assert code == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["barking_and_dagenham.svg", "barnet.svg", "bexley.svg", "brent.svg"]


@pytest.mark.parametrize("argv", [
    ["forecast", "--horizon", "0"],
    ["forecast", "--level", "1.5"],
    ["forecast", "--order", "1,1"],
    ["forecast", "--order", "1,3,0"],
    ["backtest"],
    ["nonsense"],
    ["forecast", "--order", "1,0,0", "--select"],
    ["forecast", "--format", "xml"],
    [],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


@pytest.mark.parametrize("argv, message", [
    (["forecast", "--borough", "Camden"], "Camden"),
    (["forecast", "--input", "/nonexistent/file.csv"], "cannot read"),
    (["backtest", "--train-end", "2013-01", "--order", "1,0,0"], "training window"),
])
def test_data_errors(argv, message, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1
    assert err.startswith("boxcast: error:") and message in err


def test_bad_csv_is_data_error(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("month,A\n2012-01,1\n2012-02,abc\n")
    code, _, err = run(["forecast", "--input", str(path)], capsys)
    assert code == 1 and "row 2 column 2" in err


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "boxcast.cli", "forecast", "--horizon", "0"],
                         capture_output=True, text=True)
    assert out.returncode == 2
    assert "usage" in out.stderr
