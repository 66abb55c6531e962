import json

import pytest

from calat.cli import main
from calat.lattice import window_from_json


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_example_then_synth_from_printed_set(tmp_path, capsys):
    coeffs = tmp_path / "c.json"
    assert run(["example", "example2", "-o", str(coeffs)], capsys)[0] == 0
    code, out, _ = run(["synth", "--coeffs", str(coeffs), "--window", "-1", "2", "-1", "2"], capsys)
    assert code == 0
    w = window_from_json(out)
    assert tuple(w[(-1, 1)]) == (1, 1, -5)


def test_synth_extract_check_pipeline(tmp_path, capsys):
    lat, field = tmp_path / "w.json", tmp_path / "f.json"
    assert run(["synth", "--example", "example2", "-o", str(lat)], capsys)[0] == 0
    assert run(["extract", "--lattice", str(lat), "-o", str(field)], capsys)[0] == 0
    sets = json.loads(field.read_text())["sets"]
    assert {s["b"] for s in sets} == {"1/3"}
    code, out, _ = run(["check-compat", "--lattice", str(lat)], capsys)
    assert code == 0 and json.loads(out)["compatible"] is True
    code, out, _ = run(["check_compat", "--coeffs", str(field)], capsys)
    assert code == 0


def test_synth_config_with_frame(tmp_path, capsys):
    (tmp_path / "c.json").write_text(json.dumps({"a": "-1/3", "b": "1/3", "c": "-1/3", "alpha": 1,
                                                 "beta": 2, "gamma": -1, "delta": 2}))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"coefficients": "c.json", "window": [-1, 1, -1, 1],
                               "frame": [2, 0, 0, 0, 1, 0, 0, 0, 1]}))
    code, out, _ = run(["synth", "--config", str(cfg)], capsys)
    assert code == 0
    assert tuple(window_from_json(out)[(0, 0)]) == (2, 0, 0)


def test_incompatible_coefficients_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"a": "1/2", "b": "1/3", "c": "1/3", "alpha": 1, "beta": 0,
                               "gamma": 1, "delta": 0}))
    code, out, err = run(["synth", "--coeffs", str(bad), "--window", "-1", "1", "-1", "1"], capsys)
    assert code == 2 and out == "" and "conditions" in err
    code, _, err = run(["check-compat", "--coeffs", str(bad)], capsys)
    assert code == 2 and "nonzero" in err


def test_invalid_lattice_exit_2(tmp_path, capsys):
    pts = [{"i": i, "j": j, "xyz": [i, j, 0]} for i in range(3) for j in range(3)]
    lat = tmp_path / "flat.json"
    lat.write_text(json.dumps({"imin": 0, "imax": 2, "jmin": 0, "jmax": 2, "points": pts}))
    code, _, err = run(["extract", "--lattice", str(lat)], capsys)
    assert code == 2 and "condition (b)" in err


def test_parse_error_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "imin": 0,\n  oops\n}')
    code, _, err = run(["extract", "--lattice", str(bad)], capsys)
    assert code == 1 and "bad.json:3:3" in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    assert run(["extract"], capsys)[0] == 1


def test_zero_denominator_exit_3(tmp_path, capsys):
    sing = tmp_path / "s.json"
    sing.write_text(json.dumps({"a": 2, "b": 0, "c": 1, "alpha": 1, "beta": 1, "gamma": 1, "delta": 1}))
    code, _, err = run(["check-compat", "--coeffs", str(sing)], capsys)
    assert code == 3 and "zero denominator" in err


def test_analyze_summary_and_csv(tmp_path, capsys):
    report, table = tmp_path / "a.json", tmp_path / "a.csv"
    code, out, _ = run(["analyze", "--example", "example3_d0", "--window", "-3", "3", "-3", "3",
                        "-o", str(report), "--csv", str(table)], capsys)
    assert code == 0
    assert out.strip() == "harmonic=false eigen_s=8/1 convex_everywhere=true"
    assert json.loads(report.read_text())["summary"]["eigen_s"] == "8/1"
    assert table.read_text().startswith("i,j,")


def test_export_formats_and_determinism(capsys):
    code, obj1, _ = run(["export", "--example", "example2"], capsys)
    _, obj2, _ = run(["export", "--example", "example2"], capsys)
    assert code == 0 and obj1 == obj2
    assert sum(ln.startswith("f ") for ln in obj1.splitlines()) == 18
    code, off, _ = run(["export", "--example", "example2", "--format", "off", "--digits", "8"], capsys)
    assert code == 0 and off.startswith("OFF\n16 18 0\n")


def test_float_backend_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("CALAT_BACKEND", "float")
    code, out, _ = run(["synth", "--example", "example1"], capsys)
    assert code == 0
    first = json.loads(out)["points"][0]["xyz"]
    assert all(isinstance(x, float) for x in first)
