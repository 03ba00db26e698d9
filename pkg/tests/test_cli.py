import json

import pytest

from concbound.cli import main
from concbound.linalg import BipartiteDims
from concbound.states import random_induced_state, save_density_matrix

FAST = ["--restarts", "3", "--max-iters", "300"]


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# concbound")
    header = lines[1].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[2:]]
    return header, rows


def test_bounds_family_stdout(capsys):
    assert main(["bounds", "--family", "0.5", "0.0", *FAST]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["lb_optimized"] == pytest.approx(1 / 3, abs=1e-6)
    assert report["ppt_verdict"] == "entangled-NPT"


def test_bounds_json_file(tmp_path, capsys):
    rho = random_induced_state(4, BipartiteDims(2, 3), seed=1)
    src = tmp_path / "state.json"
    save_density_matrix(rho, src)
    out = tmp_path / "report.json"
    assert main(["bounds", str(src), "--out", str(out), *FAST]) == 0
    report = json.loads(out.read_text())
    assert report["gap"] >= -1e-9
    assert (tmp_path / "report.json.manifest.json").exists()


def test_bounds_input_errors(tmp_path):
    assert main(["bounds", "/no/such/file.json"]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"dims": [2,')
    assert main(["bounds", str(bad)]) == 2
    assert main(["bounds", "--family", "0.2", "0.5"]) == 2
    assert main(["bounds"]) == 2  # neither input nor --family


def test_figure1_csv(tmp_path):
    out = tmp_path / "fig1.csv"
    args = ["figure1", "--m-list", "4,6", "--per-m", "2", "--out", str(out), *FAST]
    assert main(args) == 0
    header, rows = read_csv(out)
    assert header == [
        "seed", "M", "rank", "lb_standard", "lb_optimized", "ub",
        "gap", "eof_lb", "ppt_min_eig", "certified",
    ]
    assert len(rows) == 4
    assert {r["M"] for r in rows} == {"4", "6"}
    for r in rows:
        assert float(r["gap"]) >= -1e-6
        assert r["certified"] in ("0", "1")
    manifest = json.loads((tmp_path / "fig1.csv.manifest.json").read_text())
    assert manifest["command"] == "figure1"
    assert manifest["parameters"]["per_m"] == 2


def test_family_scan_csv(tmp_path):
    out = tmp_path / "fam.csv"
    args = [
        "family-scan", "--x-list", "0.1,0.5", "--y-list", "0.0",
        "--out", str(out), *FAST,
    ]
    assert main(args) == 0
    _, rows = read_csv(out)
    by_x = {r["x"]: r for r in rows}
    assert by_x["0.1"]["classification"] == "separable"
    assert by_x["0.5"]["classification"] == "exact"
    assert float(by_x["0.5"]["lb_optimized"]) == pytest.approx(1 / 3, abs=1e-6)


def test_family_scan_rejects_bad_grid(tmp_path):
    out = tmp_path / "fam.csv"
    args = ["family-scan", "--x-list", "0.2", "--y-list", "0.5", "--out", str(out)]
    assert main(args) == 2
    assert not out.exists()


def test_gap_scan_sorted_descending(tmp_path):
    out = tmp_path / "gap.csv"
    args = ["gap-scan", "--samples", "3", "--out", str(out), *FAST]
    assert main(args) == 0
    _, rows = read_csv(out)
    gaps = [float(r["gap"]) for r in rows]
    assert gaps == sorted(gaps, reverse=True)
    labels = {r["state"] for r in rows}
    assert "family(0.5;0.5)" in labels
