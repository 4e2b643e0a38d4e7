import csv
import io
import json
import math

import pytest

from uptri import scan as S
from uptri.cli import main
from uptri.oracle import run_oracles


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_ideal_pi(capsys):
    code, out, _ = run(capsys, "classify", "--r1", "1", "--r2", "1", "--alpha", "3.14159")
    assert code == 0
    rec = json.loads(out)
    assert rec["verdict"] == "discrete"
    assert rec["traces"]["wB"]["re"] == pytest.approx(-17, abs=1e-4)
    assert set(rec["shimizu"]) >= {"xi", "v", "threshold", "non_discrete"}


def test_classify_distances_shimizu(capsys):
    # ideal isosceles: non-discrete below sin^2(alpha/2) = (3 - 2 sqrt 2)/64
    s2 = (3 - 2 * math.sqrt(2)) / 64
    a = 2 * math.asin(math.sqrt(0.8 * s2))
    code, out, _ = run(capsys, "classify", "--m1", "0", "--m2", "0", "--alpha", repr(a))
    assert code == 0 and json.loads(out)["verdict"].startswith("non-discrete")
    assert json.loads(out)["shimizu"]["non_discrete"]


def test_classify_all_alpha(capsys):
    code, out, _ = run(capsys, "classify", "--r1", "3.5", "--r2", "1", "--alpha", "1")
    assert json.loads(out)["verdict"] in ("discrete", "discrete-and-faithful")
    assert json.loads(out)["region"]["all_alpha_discrete"]


@pytest.mark.parametrize("argv", [
    ["classify", "--r1", "0.5", "--r2", "1", "--alpha", "1"],
    ["classify", "--r1", "2", "--r2", "1"],
    ["classify", "--r1", "2", "--m1", "1", "--r2", "1", "--alpha", "1"],
    ["classify", "--r1", "2", "--r2", "1", "--alpha", "7"],
    ["scan", "--resolution", "1"],
    ["scan", "--xrange", "2,1"],
    ["scan", "--grid", "xy", "--yrange", "-1,0"],
    ["scan", "--grid", "rr", "--format", "svg"],
    ["witness-search", "--r1", "2", "--r2", "1", "--alpha", "1", "--max-word-len", "21"],
    ["bogus"],
    ["scan", "--workers", "0"],
])
def test_invalid_arguments_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nr1 = 3\nr2 = 2\nalpha = 2.0\nmax-word-len = 6\n")
    code, out, _ = run(capsys, "classify", "--config", str(cfg))
    assert code == 0 and json.loads(out)["params"]["alpha"] == 2.0
    code, out, _ = run(capsys, "classify", "--config", str(cfg), "--alpha", "1.0")
    assert json.loads(out)["params"]["alpha"] == 1.0
    cfg.write_text("nonsense = 1\n")
    assert run(capsys, "classify", "--config", str(cfg))[0] == 2
    assert run(capsys, "classify", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_scan_csv_schema(capsys):
    code, out, _ = run(capsys, "scan", "--resolution", "4x3")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == S.POINT_COLUMNS
    assert len(rows) == 1 + 12
    # 17 significant digits on every float
    y = rows[1][rows[0].index("Y")]
    assert len(y.replace(".", "").lstrip("0")) == 17


def test_scan_deterministic_across_workers(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["scan", "--format", "json", "--resolution", "12", "--out", str(a)]) == 0
    assert main(["scan", "--format", "json", "--resolution", "12", "--workers", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c, d = tmp_path / "c.csv", tmp_path / "d.csv"
    main(["scan", "--grid", "rr", "--resolution", "9", "--out", str(c)])
    main(["scan", "--grid", "rr", "--resolution", "9", "--workers", "2", "--out", str(d)])
    assert c.read_bytes() == d.read_bytes()


def test_scan_json_vertices(capsys):
    code, out, _ = run(capsys, "scan", "--format", "json", "--resolution", "3")
    meta = json.loads(out)["meta"]
    flat = [c for v in meta["boundary_vertices"][:3] for c in v]
    assert flat == pytest.approx([2, 0.5, 1, 1 / 6, 2 / 3, 1 / 12])


def test_scan_svg(tmp_path):
    out = tmp_path / "fig.svg"
    assert main(["scan", "--format", "svg", "--resolution", "20", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert "(2, 0.5)" in text and "(1, 0.1667)" in text and "polyline" in text


def test_phi_overlay_values():
    for k in range(2, 6):
        x, y = S.phi_curve(k, 0, 3)[0]
        assert x == pytest.approx(2 / k) and y == pytest.approx(1 / (4 * k * (k + 1)))


def test_alpha_scan_ideal_isosceles(capsys):
    code, out, _ = run(capsys, "alpha-scan", "--r1", "1", "--r2", "1", "--resolution", "720", "--xrange", "0,3.141592653589793")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    shimizu = (3 - 2 * math.sqrt(2)) / 64
    for row in rows:
        s = math.sqrt(float(row["sin2_half"]))
        if s >= 0.5 + 1e-9:
            assert row["verdict"] == "discrete"
        elif s * s < shimizu:
            assert row["verdict"] == "non-discrete"
        elif s < 0.5 - 1e-9:
            assert row["verdict"] == "undetermined"
    assert run(capsys, "alpha-scan", "--r1", "1", "--r2", "1", "--alpha", "1")[0] == 2


def test_witness_search_command(capsys):
    a = 2 * math.asin(1 / 25)
    code, out, _ = run(capsys, "witness-search", "--r1", "3", "--r2", "2", "--alpha", repr(a), "--max-word-len", "6")
    rec = json.loads(out)
    assert code == 0 and [1, 2, 1, 2, 1, 3] in [w["word"] for w in rec["witnesses"]]
    assert rec["label"] == "non-discrete (numerical witness)"


def test_oracle_pass_fail_and_seed(capsys):
    code, out, _ = run(capsys, "oracle", "--suite", "trace", "--suite", "shimizu", "--seed", "5")
    assert code == 0 and out.count("PASS") == 2
    assert run(capsys, "oracle", "--suite", "trace", "--seed", "5")[1] == run(capsys, "oracle", "--suite", "trace", "--seed", "5")[1]
    code, out, _ = run(capsys, "oracle", "--suite", "trace", "--perturb", "1e-6")
    assert code == 3 and "FAIL trace" in out


def test_full_oracle_default_run():
    results = run_oracles(seed=0)
    assert all(r.passed for r in results), [r.line() for r in results]
    assert {r.name for r in results} == {"trace", "conditions-star", "shimizu", "ordering", "geometry", "representation"}
