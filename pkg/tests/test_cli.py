from __future__ import annotations

import subprocess
import sys

import pytest

from hbl.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_h3(capsys):
    code, out, _ = run(capsys, "norm", "--group", "h3", "0,0,20")
    assert code == 0
    assert out.splitlines()[0] == "norm: 14"
    code, out, _ = run(capsys, "norm", "--group", "h3", "0,0,0")
    assert code == 0 and out.startswith("norm: 0")


def test_norm_formal_value_for_parity_invalid_triple(capsys):
    code, out, _ = run(capsys, "norm", "--group", "h3", "0,0,19")
    assert code == 0 and out.splitlines()[0] == "norm: 14"


def test_norm_lamplighter(capsys):
    code, out, _ = run(capsys, "norm", "--group", "lamplighter", "--lamps", "-3", "--head", "2")
    assert code == 0 and out.splitlines()[0] == "norm: 6"
    assert out.splitlines()[1] == "oracle: bfs=6 agree"


def test_norm_wreath_and_z2(capsys):
    code, out, _ = run(capsys, "norm", "--group", "z2", "3,-4")
    assert code == 0 and out.splitlines()[0] == "norm: 7"
    code, out, _ = run(capsys, "norm", "--group", "wreath", "table=3:1,-3:1;head=0")
    assert code == 0 and out.splitlines()[0] == "norm: 14"


@pytest.mark.parametrize("argv", [
    ("norm", "--group", "h3", "1,2"),
    ("norm", "--group", "nope", "1,2,3"),
    ("norm", "--group", "h3", "x,y,z"),
    ("horoball", "--family", "unknown", "--window", "2,2,5", "--schedule", "2..6"),
    ("frobnicate",),
    ("distortion", "--n", "8..x"),
    ("ball", "--radius", "2", "--budget-mb", "-1"),
])
def test_parse_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_budget_exit_3(capsys):
    import os
    before = os.environ.get("HBL_BUDGET_MB")
    code, _, err = run(capsys, "ball", "--group", "h3", "--radius", "60", "--budget-mb", "1")
    assert code == 3 and "budget" in err
    assert os.environ.get("HBL_BUDGET_MB") == before


def test_ball_and_render_snapshot(capsys, tmp_path):
    snap = tmp_path / "b.hbl"
    code, out, _ = run(capsys, "ball", "--group", "h3", "--radius", "4", "--out", str(snap))
    assert code == 0 and snap.exists()
    svg = tmp_path / "b.svg"
    assert run(capsys, "render", "--kind", "snapshot", "--input", str(snap), "--out", str(svg))[0] == 0
    assert svg.read_text().startswith("<!-- generated by hbl")


def test_corrupt_snapshot_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.hbl"
    bad.write_text("HBL1;nonsense\n")
    assert run(capsys, "render", "--kind", "snapshot", "--input", str(bad),
               "--out", str(tmp_path / "x.svg"))[0] == 2


def test_distortion_csv_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(capsys, "distortion", "--group", "h3", "--n", "6..8", "--ell", "3",
                   "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "n,ell,delta,witness_a,witness_b"


def test_distortion_empty_range(capsys, tmp_path):
    p = tmp_path / "e.csv"
    code, out, _ = run(capsys, "distortion", "--group", "z2", "--n", "5..4", "--out", str(p))
    assert code == 0 and p.read_text() == "n,ell,delta,witness_a,witness_b\n"


def test_distortion_z2_rows(capsys):
    code, out, _ = run(capsys, "distortion", "--group", "z2", "--n", "3..5", "--ell", "4")
    assert code == 0
    assert [line for line in out.splitlines() if line.startswith("n=")] == \
        ["n=3: 1,2,3,4", "n=4: 1,2,3,4", "n=5: 1,2,3,4"]


def test_horoball_families(capsys, tmp_path):
    csv_path = tmp_path / "w.csv"
    code, out, _ = run(capsys, "horoball", "--family", "h3-central", "--window", "2,2,5",
                       "--schedule", "2..6", "--out", str(csv_path), "--svg", str(tmp_path / "w.svg"))
    assert code == 0 and "matches prediction: True" in out
    code, out, _ = run(capsys, "horoball", "--family", "lamplighter", "--window", "4",
                       "--schedule", "5..9")
    assert code == 0 and "matches prediction: True" in out
    code, out, _ = run(capsys, "horoball", "--family", "constant-h3", "--window", "1,1,2",
                       "--schedule", "2..4")
    assert code == 0 and "trivial: True" in out
    svg = tmp_path / "r.svg"
    assert run(capsys, "render", "--kind", "window", "--input", str(csv_path), "--out", str(svg))[0] == 0


def test_busemann_maxca_certify(capsys):
    code, out, _ = run(capsys, "busemann", "--group", "h3", "--tail", "R", "--window", "2,2,3")
    assert code == 0 and "UNDETERMINED=0" in out
    code, out, _ = run(capsys, "busemann", "--group", "lamplighter", "--prefix", "ab",
                       "--tail", "A", "--window", "2")
    assert code == 0
    code, out, _ = run(capsys, "maxca", "--group", "lamplighter", "--n", "4")
    assert code == 0 and "ball law holds: True" in out
    code, out, _ = run(capsys, "certify", "--points", "0,0;1,0;2,0;2,1")
    assert code == 0 and "offset: 0" in out
    code, out, _ = run(capsys, "certify", "--l1-length", "3..4")
    assert code == 0 and out.count("max deficit 0") == 2
    # a closed loop costs its full length
    code, out, _ = run(capsys, "certify", "--word", "RULD")
    assert code == 0 and "offset: 4" in out
    code, out, _ = run(capsys, "certify", "--word", "RULD" * 3)
    assert code == 0 and "no certificate" in out


def test_geodesics_command(capsys):
    code, out, _ = run(capsys, "geodesics", "--group", "h3", "1,1,1")
    assert code == 0 and out.splitlines() == ["RU", "count: 1"]
    code, out, _ = run(capsys, "geodesics", "--group", "h3", "0,0,20", "--canonical")
    assert code == 0 and len(out.split()[0]) == 14


def test_render_eta_and_detours(capsys, tmp_path):
    eta_svg = tmp_path / "eta.svg"
    assert run(capsys, "render", "--kind", "eta", "--n", "10", "--out", str(eta_svg))[0] == 0
    assert ">20<" in eta_svg.read_text()
    det = tmp_path / "det.svg"
    code, out, _ = run(capsys, "render", "--kind", "detours", "--out", str(det))
    assert code == 0 and det.read_text().count("<polyline") == 4


def test_config_merge(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# experiment\ngroup = z2\nell = 2\n")
    code, out, _ = run(capsys, "--config", str(cfg), "distortion", "--n", "3")
    assert code == 0 and "n=3: 1,2" in out
    code, out, _ = run(capsys, "--config", str(cfg), "distortion", "--n", "3", "--ell", "3")
    assert code == 0 and "n=3: 1,2,3" in out
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n")
    assert run(capsys, "--config", str(bad), "selftest")[0] == 2


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", "3")
    assert code == 0 and "FAIL" not in out


def test_parse_range():
    assert parse_range("8..10") == [8, 9, 10]
    assert parse_range("5..4") == []
    assert parse_range("1,4") == [1, 4]


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "hbl.cli", "norm", "--group", "h3", "10,5,100"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.splitlines()[0] == "norm: 21"
