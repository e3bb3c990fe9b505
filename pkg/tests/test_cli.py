import json
import os

import numpy as np
import pytest

from isoscore import cli, io

DATA = os.path.join(os.path.dirname(__file__), "data")
FIXTURE = os.path.join(DATA, "fixture_10000x32.bin")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_score_isoscore_on_isotropic_ball(tmp_path, capsys):
    p = tmp_path / "ball.csv"
    assert run(capsys, "generate", "--family", "ink", "--n", "3", "--k", "3", "--count", "20000",
               "--seed", "3", "--out", str(p))[0] == 0
    code, out, _ = run(capsys, "score", "--input", str(p), "--metric", "isoscore")
    assert code == 0
    assert out["scores"]["isoscore"] == pytest.approx(1.0, abs=0.01)
    assert set(out["reports"]["isoscore"]["diagnostics"]) == {"dims_utilized", "defect"}
    code, out, _ = run(capsys, "score", "--input", str(p), "--verbose")
    assert "normalized_variance_vector" in out["reports"]["isoscore"]["diagnostics"]


def test_score_all_is_reproducible(capsys):
    args = ("score", "--input", FIXTURE, "--metric", "all", "--seed", "7", "--pairs", "100000")
    code, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert code == 0 and a == b
    assert list(a["scores"]) == ["isoscore", "avg_cos_sim", "partition", "id_score", "varex"]


def test_varex_k_is_echoed(capsys):
    code, out, _ = run(capsys, "score", "--input", FIXTURE, "--metric", "varex", "--k", "5")
    assert code == 0 and out["reports"]["varex"]["config"] == {"k": 5}


def test_randomised_metrics_need_seed(capsys):
    for m in ("avg_cos_sim", "id_score"):
        code, _, err = run(capsys, "score", "--input", FIXTURE, "--metric", m)
        assert code == 2 and "--seed" in json.loads(err)["message"]


@pytest.mark.parametrize(
    "argv",
    [
        ["score", "--input", "/nonexistent.csv"],
        ["score", "--input", FIXTURE, "--metric", "entropy"],
        ["score"],
        ["generate", "--family", "ink", "--n", "3", "--count", "10", "--out", "x.csv"],
        ["generate", "--family", "ink", "--n", "3", "--k", "9", "--count", "10", "--out", "x.csv"],
        ["generate", "--family", "meatball", "--out", "x.csv"],
        ["generate", "--family", "uniform", "--n", "2", "--out", "x.csv"],
        ["validate", "--tests", "9"],
    ],
)
def test_usage_errors_exit_2(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code = cli.main(argv) if argv != ["score"] else None
    if code is None:
        with pytest.raises(SystemExit) as e:
            cli.main(argv)
        code = e.value.code
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_ragged_csv_reports_line(tmp_path, capsys):
    p = tmp_path / "r.csv"
    p.write_text("1,2\n3\n")
    code, _, err = run(capsys, "score", "--input", str(p))
    assert code == 2
    e = json.loads(err)
    assert e["error"] == "ParseError" and "line 2" in e["message"]


def test_generate_sidecar_and_formats(tmp_path, capsys):
    b = tmp_path / "x.bin"
    code, out, _ = run(capsys, "generate", "--family", "ink", "--n", "9", "--k", "5", "--count",
                       "100000", "--seed", "1", "--out", str(b))
    assert code == 0 and out["format"] == "binary"
    side = json.loads((tmp_path / "x.bin.json").read_text())
    assert side["spec"]["k"] == 5 and side["spec"]["seed"] == 1
    _, s, _ = run(capsys, "score", "--input", str(b))
    assert s["scores"]["isoscore"] == pytest.approx(0.5, abs=0.01)

    c = tmp_path / "m.csv"
    run(capsys, "generate", "--family", "meatball", "--line", "1000", "--ball", "1000", "--seed", "1",
        "--out", str(c))
    _, s, _ = run(capsys, "score", "--input", str(c))
    assert s["count"] == 2000 and s["scores"]["isoscore"] == pytest.approx(0.5, abs=0.1)

    u = tmp_path / "u.csv"
    run(capsys, "generate", "--family", "uniform", "--n", "2", "--count", "100000", "--out", str(u))
    _, s, _ = run(capsys, "score", "--input", str(u), "--format", "csv")
    assert s["scores"]["isoscore"] >= 0.99


def test_csv_header_flag(tmp_path, capsys):
    p = tmp_path / "h.csv"
    rng = np.random.default_rng(0)
    np.savetxt(p, rng.normal(size=(50, 3)), delimiter=",", header="a,b,c", comments="")
    assert run(capsys, "score", "--input", str(p))[0] == 2
    code, out, _ = run(capsys, "score", "--input", str(p), "--header")
    assert code == 0 and out["count"] == 50


def test_validate_single_test(tmp_path, capsys):
    code, out, err = run(capsys, "validate", "--tests", "4", "--count", "20000", "--out", str(tmp_path),
                         "--pretty")
    assert code == 0
    assert list(out["matrix"]) == ["4"]
    assert out["scores"]["4"]["isoscore"] == pytest.approx([0.216] * 4, abs=0.01)
    assert "isoscore" in err
    assert (tmp_path / "report.json").exists() and (tmp_path / "curves.csv").exists()


def test_validate_exit_3_on_isoscore_regression(tmp_path, capsys, monkeypatch):
    from isoscore import harness

    monkeypatch.setattr(harness, "isoscore_column_ok", lambda outs: False)
    real = harness.build_report

    def fake(outs, cfg):
        rep = real(outs, cfg)
        rep["isoscore_column_pass"] = harness.isoscore_column_ok(outs)
        return rep

    monkeypatch.setattr(harness, "build_report", fake)
    code, _, _ = run(capsys, "validate", "--tests", "4", "--count", "2000", "--out", str(tmp_path))
    assert code == 3


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "isoscore", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "score" in r.stdout
