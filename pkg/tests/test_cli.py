"""CLI subcommands, exit codes, JSON output."""

import json

import pytest

from skdiag import parse_skd
from skdiag.cli import main
from skdiag.fixtures import fixture_text as bundled_text

from tests.conftest import fixture_text


@pytest.fixture
def trefoil_path(tmp_path):
    p = tmp_path / "trefoil.skd"
    p.write_text(bundled_text("trefoil.skd"))
    return str(p)


@pytest.fixture
def oracle_path(tmp_path):
    p = tmp_path / "trefoil.oracle.skd"
    p.write_text(bundled_text("trefoil.oracle.skd"))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_ok(capsys, trefoil_path):
    code, out, _ = run(capsys, "validate", trefoil_path)
    assert code == 0
    assert "well-formed" in out


def test_validate_invalid_complex_exits_1(capsys, tmp_path):
    p = tmp_path / "bad.skd"
    p.write_text("triple T1 lines=bm,bt,mt\n")
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1
    assert "not used" in out


def test_validate_syntax_error_exits_2(capsys, tmp_path):
    p = tmp_path / "broken.skd"
    p.write_text("whatnot X\n")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2
    assert "unknown record kind" in err


def test_missing_file_exits_2(capsys):
    code, _, err = run(capsys, "census", "no/such/file.skd")
    assert code == 2
    assert "cannot read" in err


def test_census_json(capsys, trefoil_path):
    code, out, _ = run(capsys, "census", trefoil_path, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["format_version"] == 1
    assert payload["counts"]["triple_points"] == 4
    assert payload["counts"]["closed_curves"] == 1


def test_trace(capsys, trefoil_path):
    code, out, _ = run(capsys, "trace", trefoil_path)
    assert code == 0
    assert "closed curve closed:" in out
    assert out.count("open curve") == 2


def test_check_exchangeable_true(capsys, trefoil_path):
    code, out, _ = run(capsys, "check-exchangeable", trefoil_path,
                       "--gamma", "closed")
    assert code == 0
    assert "yes" in out


def test_check_exchangeable_empty_gamma(capsys, trefoil_path):
    code, _, _ = run(capsys, "check-exchangeable", trefoil_path, "--gamma", "")
    assert code == 0


def test_check_exchangeable_false(capsys, tmp_path):
    p = tmp_path / "r3.skd"
    p.write_text(fixture_text("r3.skd"))
    code, out, _ = run(capsys, "check-exchangeable", str(p), "--gamma", "ek1")
    assert code == 1
    assert "no" in out and "T0" in out


def test_gamma_accepts_edge_ids(capsys, trefoil_path):
    code, out, _ = run(capsys, "check-exchangeable", trefoil_path,
                       "--gamma", "closed.4", "--json")
    assert code == 0
    assert json.loads(out)["gamma"] == ["closed"]


def test_gamma_unknown_token_exits_2(capsys, trefoil_path):
    code, _, err = run(capsys, "check-exchangeable", trefoil_path,
                       "--gamma", "nope")
    assert code == 2
    assert "no curve or edge" in err


def test_check_dd(capsys, trefoil_path):
    code, _, _ = run(capsys, "check-dd", trefoil_path, "--gamma", "closed")
    assert code == 0
    code, out, _ = run(capsys, "check-dd", trefoil_path, "--gamma", "open1")
    assert code == 1
    assert "no" in out


def test_crossing_change_roundtrip(capsys, trefoil_path, tmp_path):
    out_path = tmp_path / "changed.skd"
    code, out, _ = run(capsys, "crossing-change", trefoil_path,
                       "--gamma", "closed", "-o", str(out_path))
    assert code == 0
    changed = parse_skd(out_path.read_text())
    assert changed.triples_by_id["T1"].line_types[0].value == "bm"


def test_crossing_change_non_exchangeable_exits_1(capsys, tmp_path):
    p = tmp_path / "r3.skd"
    p.write_text(fixture_text("r3.skd"))
    code, _, err = run(capsys, "crossing-change", str(p), "--gamma", "ek1",
                       "-o", str(tmp_path / "x.skd"))
    assert code == 1
    assert "not valid" in err


def test_apply_script_with_trail(capsys, trefoil_path, tmp_path):
    skm = tmp_path / "seq.skm"
    skm.write_text(fixture_text("trefoil_seq.skm"))
    out_path = tmp_path / "out.skd"
    trail_path = tmp_path / "trail.json"
    code, out, _ = run(capsys, "apply", trefoil_path, str(skm),
                       "--gamma", "closed", "-o", str(out_path),
                       "--trail", str(trail_path))
    assert code == 0
    assert "applied 3 move(s)" in out
    trail = json.loads(trail_path.read_text())["trail"]
    assert len(trail) == 3
    assert all(t["exchangeable"] and t["dd"] for t in trail)
    assert trail[-1]["gamma"] == ["closed"]
    assert parse_skd(out_path.read_text())


def test_apply_forbidden_script_exits_2(capsys, trefoil_path, tmp_path):
    skm = tmp_path / "bad.skm"
    skm.write_text("R2+ t1=T1 t2=T2\n")
    code, _, err = run(capsys, "apply", trefoil_path, str(skm))
    assert code == 2
    assert "t-descendent" in err


def test_apply_failing_step_exits_2(capsys, trefoil_path, tmp_path):
    skm = tmp_path / "bad.skm"
    skm.write_text("R1- circle=missing\n")
    code, _, err = run(capsys, "apply", trefoil_path, str(skm))
    assert code == 2
    assert "step 0" in err


def test_enumerate(capsys, trefoil_path):
    code, out, _ = run(capsys, "enumerate", trefoil_path, "--json")
    assert code == 0
    unions = json.loads(out)["unions"]
    assert {"gamma": [], "size": 0, "dd": True} in unions
    assert any(u["gamma"] == ["closed"] for u in unions)


def test_enumerate_with_oracle(capsys, trefoil_path, oracle_path):
    code, out, _ = run(capsys, "enumerate", trefoil_path,
                       "--oracle", oracle_path, "--json")
    assert code == 0
    unions = json.loads(out)["unions"]
    assert any(u["gamma"] == ["closed"] and u["verdict"] == "trivial"
               for u in unions)


def test_enumerate_jobs(capsys, trefoil_path):
    code, out, _ = run(capsys, "enumerate", trefoil_path, "--jobs", "2",
                       "--json")
    assert code == 0
    assert len(json.loads(out)["unions"]) == 8


def test_du_bound(capsys, trefoil_path, oracle_path):
    code, out, _ = run(capsys, "du-bound", trefoil_path,
                       "--oracle", oracle_path)
    assert code == 0
    assert "best_size: 1" in out
    assert "upper bound" in out


def test_du_bound_json(capsys, trefoil_path, oracle_path):
    code, out, _ = run(capsys, "du-bound", trefoil_path,
                       "--oracle", oracle_path, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["best_size"] == 1
    assert payload["format_version"] == 1


def test_schematic(capsys, trefoil_path, tmp_path):
    out_path = tmp_path / "trefoil.dot"
    code, _, _ = run(capsys, "schematic", trefoil_path, "-o", str(out_path))
    assert code == 0
    dot = out_path.read_text()
    assert dot.startswith("graph singularity {")
    assert '"T_T1"' in dot


def test_fingerprint_stable(capsys, trefoil_path):
    code1, out1, _ = run(capsys, "fingerprint", trefoil_path)
    code2, out2, _ = run(capsys, "fingerprint", trefoil_path)
    assert code1 == code2 == 0
    assert out1 == out2
    assert len(out1.strip()) == 64
