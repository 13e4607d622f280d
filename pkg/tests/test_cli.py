"""Tests for the command-line client."""

import io
import json

import pytest

from spinlight.cli import build_parser, main
from spinlight.runner import DEMO_NAMES, demo_script_text

EPR_TEXT = demo_script_text("epr")


def write_script(tmp_path, text, name="script.proto"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_run_ok(tmp_path, capsys):
    path = write_script(tmp_path, EPR_TEXT)
    assert main(["run", path, "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "status: ok" in out
    assert "outcome 1:" in out
    assert "prediction 1: 1.16666666667" in out
    assert "var +1z +2z = 0.333333333333" in out
    assert "PASS assert duan" in out


def test_run_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(EPR_TEXT))
    assert main(["run", "-"]) == 0
    assert "status: ok" in capsys.readouterr().out


def test_run_json_output(tmp_path):
    script = write_script(tmp_path, EPR_TEXT)
    out = tmp_path / "report.json"
    assert main(["run", script, "--json", str(out)]) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["status"] == "ok"
    assert report["schema"] == 1
    assert "timestamp" in report


def test_run_assert_failure_exit(tmp_path, capsys):
    text = ("samples 2\nbeam k=0.0 pass 1@0 2@0 measure\n"
            "assert duan 1 2 lambda=1.0 signs=-+ expect=violated\n")
    assert main(["run", write_script(tmp_path, text)]) == 1
    assert "FAIL assert duan" in capsys.readouterr().out


def test_run_parse_error_exit(tmp_path, capsys):
    assert main(["run", write_script(tmp_path, "samples 2\nbogus\n")]) == 2
    assert "unknown keyword" in capsys.readouterr().err


def test_run_missing_file(capsys):
    assert main(["run", "/no/such/file.proto"]) == 2
    assert "error:" in capsys.readouterr().err


def test_run_numerical_exit(tmp_path, capsys):
    text = "samples 2\nbeam k=1e160 pass 1@0 2@0 measure\n"
    assert main(["run", write_script(tmp_path, text)]) == 3
    assert "beam 1:" in capsys.readouterr().err


def test_check(tmp_path, capsys):
    assert main(["check", write_script(tmp_path, EPR_TEXT)]) == 0
    assert "statements" in capsys.readouterr().out
    assert main(["check", write_script(tmp_path, "samples 0\n")]) == 2


def test_demo_matches_golden(tmp_path, capsys):
    import pathlib

    golden_dir = pathlib.Path(__file__).parent / "golden"
    for name in DEMO_NAMES:
        assert main(["demo", name]) == 0
        out = capsys.readouterr().out
        assert out == (golden_dir / f"{name}.proto").read_text(encoding="utf-8")


def test_demo_unknown(capsys):
    assert main(["demo", "nope"]) == 2
    assert "unknown demo" in capsys.readouterr().err


def test_sweep_to_stdout(tmp_path, capsys):
    template = "samples 2\nbeam k=$kappa pass 1@0 2@0 measure\nreport var +1z +2z\n"
    assert main(["sweep", write_script(tmp_path, template),
                 "--grid", "kappa=0:1:3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "kappa,var +1z +2z"
    assert len(lines) == 4


def test_sweep_to_file(tmp_path):
    template = "samples 2\nbeam k=$kappa pass 1@0 2@0 measure\nreport var +1z +2z\n"
    out = tmp_path / "grid.csv"
    assert main(["sweep", write_script(tmp_path, template),
                 "--grid", "kappa=0:1:3", "--out", str(out), "--jobs", "2"]) == 0
    assert out.read_text(encoding="utf-8").startswith("kappa,var +1z +2z\n")


def test_sweep_bad_grid_exit(tmp_path, capsys):
    template = "samples 2\n# $k\n"
    assert main(["sweep", write_script(tmp_path, template),
                 "--grid", "k=0:1"]) == 2
    assert "error:" in capsys.readouterr().err


def test_server_unreachable_exit(tmp_path, capsys):
    path = write_script(tmp_path, EPR_TEXT)
    assert main(["run", path, "--server", "http://127.0.0.1:9/"]) == 3
    assert "error:" in capsys.readouterr().err


def test_serve_parser():
    args = build_parser().parse_args(["serve", "--host", "0.0.0.0", "--port", "9001"])
    assert args.command == "serve"
    assert (args.host, args.port) == ("0.0.0.0", 9001)


def test_missing_subcommand():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([])
    assert exc.value.code == 2
