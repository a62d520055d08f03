import argparse
import json

import numpy as np
import pytest

from qreflection.cli import format_lifetime_table, main, parse_heights
from qreflection.io import read_csv


def run(args, tmp_path):
    return main(args + ["--out", str(tmp_path), "--no-timestamp"])


@pytest.mark.parametrize("text, expected", [
    ("0.1", [0.1]),
    ("0.001,0.01", [0.001, 0.01]),
    ("1e-3:1e-1:log:3", [1e-3, 1e-2, 1e-1]),
    ("1:3:lin:3", [1.0, 2.0, 3.0]),
])
def test_parse_heights(text, expected):
    assert parse_heights(text) == pytest.approx(expected)


@pytest.mark.parametrize("text", ["", " , ", "1:2:cubic:3", "-1:2:lin:3", "0.1,-2", "1:2:log:0", "abc"])
def test_parse_heights_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_heights(text)


def test_potential_perfect_tail_and_determinism(tmp_path):
    assert run(["potential", "--material", "perfect"], tmp_path) == 0
    first = (tmp_path / "potential_perfect.csv").read_bytes()
    cols, rows = read_csv(tmp_path / "potential_perfect.csv")
    assert cols == ["z_nm", "V_neV", "ratio_to_ideal"]
    z, v, _ = np.array(rows).T
    meta = json.loads((tmp_path / "potential_perfect.json").read_text())
    tail = z >= 1e5
    slope, intercept = np.polyfit(np.log(z[tail]), np.log(-v[tail]), 1)
    assert slope == pytest.approx(-4.0, abs=1e-3)
    assert np.exp(intercept) == pytest.approx(meta["c4_star"], rel=2e-3)
    assert run(["potential", "--material", "perfect"], tmp_path) == 0
    assert (tmp_path / "potential_perfect.csv").read_bytes() == first


def test_timestamp_line(tmp_path):
    assert main(["potential", "--material", "perfect", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "potential_perfect.csv").read_text()
    assert "# generated:" in text


def test_porous_potential_is_weaker(tmp_path):
    assert run(["potential", "--material", "silica"], tmp_path) == 0
    assert run(["potential", "--material", "silica", "--porosity", "0.98"], tmp_path) == 0
    _, bulk = read_csv(tmp_path / "potential_silica.csv")
    _, porous = read_csv(tmp_path / "potential_silica-p0.98.csv")
    bulk, porous = np.array(bulk), np.array(porous)
    assert np.array_equal(bulk[:, 0], porous[:, 0])
    assert np.all(np.abs(porous[:, 1]) < np.abs(bulk[:, 1]))


def test_unknown_material(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        run(["potential", "--material", "unobtainium"], tmp_path)
    assert info.value.code != 0
    assert "materials.yaml" in capsys.readouterr().err


def test_reflectivity(tmp_path):
    assert run(["reflectivity", "--material", "perfect", "--heights", "1e-4:1:log:5"], tmp_path) == 0
    summary = json.loads((tmp_path / "reflectivity.json").read_text())["perfect"]
    assert summary["prob_reflect_h0.10m"] == pytest.approx(0.14, abs=0.03)
    assert summary["monotone_decreasing"]
    cols, rows = read_csv(tmp_path / "reflectivity_perfect.csv")
    assert cols == ["h_m", "E_neV", "re_r", "im_r", "prob_reflect", "flux_deficit"]
    probs = [row[4] for row in rows]
    assert np.all(np.diff(probs) < 0)
    assert all(abs(row[5]) < 1e-8 for row in rows)


def test_empty_heights_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as info:
        run(["reflectivity", "--heights", ""], tmp_path)
    assert info.value.code == 2


def test_numerical_failure_exit_code(tmp_path):
    assert run(["reflectivity", "--material", "perfect", "--heights", "0.1", "--tol", "1e-30"],
               tmp_path) == 1


def test_badlands(tmp_path):
    assert run(["badlands", "--material", "silica", "--heights", "0.001,0.01,0.1", "--points", "200"],
               tmp_path) == 0
    summary = json.loads((tmp_path / "badlands.json").read_text())
    peaks = [item["max_Q"] for item in summary]
    assert [item["h_m"] for item in summary] == [0.001, 0.01, 0.1]
    assert peaks[0] > peaks[1] > peaks[2]
    cols, rows = read_csv(tmp_path / "badlands_silica_h0.1m.csv")
    assert cols == ["z_nm", "phase_zbold", "Q", "F"]
    assert len(rows) == 200
    assert abs(rows[0][2]) < 1e-10 and abs(rows[-1][2]) < 1e-10


def test_lifetimes_gbar_scaling(tmp_path):
    taus = []
    for g in ("9.81", "19.62"):
        out = tmp_path / g
        assert main(["lifetimes", "--material", "perfect", "--gbar", g, "--out", str(out),
                     "--no-timestamp"]) == 0
        data = json.loads((out / "lifetimes.json").read_text())
        taus.append(data["rows"][0]["tau_s"])
        header = (out / "lifetimes.csv").read_text().splitlines()
        assert header[2] == "material,re_a_nm,im_a_nm,tau_s"
        assert float(header[3].split(",")[3]) == pytest.approx(taus[-1], rel=1e-11)
        assert (out / "lifetimes.txt").read_text().startswith(" ")
    assert taus[0] == pytest.approx(0.11, rel=0.2)
    assert taus[1] == pytest.approx(taus[0] / 2, rel=1e-12)


def test_lifetime_text_table_layout():
    text = format_lifetime_table(["perfect", "silica"], [-2.6 - 28.9j, -4.3 - 14.6j], [0.111, 0.22])
    lines = text.splitlines()
    assert len(lines) == 4
    assert lines[0].index("perfect") < lines[0].index("silica")
    assert len({len(line) for line in lines}) == 1


def test_materials_command(capsys):
    assert main(["materials"]) == 0
    out = capsys.readouterr().out
    assert "aerogel98" in out and "materials.yaml" in out


def test_no_command_is_usage_error():
    assert main([]) == 2


@pytest.mark.slow
def test_golden_check(capsys):
    assert main(["--check"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 14 and "FAIL" not in out
