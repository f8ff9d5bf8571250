"""Parsing, canonical serialization, fingerprints, schematic export."""

import random

import pytest

from skdiag import (
    MoveKind,
    ParseError,
    R1Plus,
    R2Minus,
    census,
    fingerprint,
    parse_skd,
    parse_skd_document,
    parse_skm,
    serialize_canonical,
    export_schematic,
)
from skdiag.explorer import SizeBudget, generate_random_complex

from tests.conftest import fixture_text

# frozen at fixture creation; guards against accidental format drift
TREFOIL_FINGERPRINT = \
    "c6de7252cf5e6543e9bcb98059be81d963d92396ecfe185102ab061d6878cc6f"


def test_single_circle_document():
    cx = parse_skd("circle C1\n")
    assert census(cx).closed_curves == 1


def test_trefoil_parses(trefoil):
    text = fixture_text_of_trefoil()
    assert sum(1 for line in text.splitlines()
               if line.startswith("triple ")) == 4
    assert fingerprint(trefoil) == TREFOIL_FINGERPRINT


def fixture_text_of_trefoil():
    from skdiag.fixtures import fixture_text as bundled_text
    return bundled_text("trefoil.skd")


def test_round_trip_idempotent(trefoil, r2, r3, r5, r6):
    for cx in (trefoil, r2, r3, r5, r6):
        text = serialize_canonical(cx)
        again = parse_skd(text)
        assert again == cx
        assert serialize_canonical(again) == text


def test_fingerprint_invariant_under_record_order(trefoil):
    text = serialize_canonical(trefoil)
    lines = [l for l in text.splitlines() if l]
    rng = random.Random(3)
    for _ in range(5):
        rng.shuffle(lines)
        shuffled = parse_skd("\n".join(lines) + "\n")
        assert fingerprint(shuffled) == fingerprint(trefoil)


def test_fingerprint_differs_for_different_complexes(trefoil, r2):
    assert fingerprint(trefoil) != fingerprint(r2)


def test_round_trip_random_complexes():
    for seed in range(1, 11):
        cx = generate_random_complex(seed, SizeBudget(2, 2, 1), disks=1)
        assert parse_skd(serialize_canonical(cx)) == cx


def test_comment_and_blank_lines():
    cx = parse_skd("# header\n\ncircle C1  # trailing\n")
    assert len(cx.edges) == 1


def test_duplicate_id_diagnostic():
    with pytest.raises(ParseError) as exc:
        parse_skd("circle C1\ncircle C1\n")
    (diag,) = exc.value.diagnostics
    assert diag[0] == 2
    assert "duplicate" in diag[2]


def test_slot_conflict_reports_both_lines():
    text = """triple T1 lines=bm,bt,mt
branch B1
branch B2
edge E1 T:T1.0.a B:B1
edge E2 T:T1.0.a B:B2
"""
    with pytest.raises(ParseError) as exc:
        parse_skd(text)
    conflict_lines = {ln for ln, _, msg in exc.value.diagnostics
                      if "claimed by edges" in msg}
    assert {4, 5} <= conflict_lines


def test_dangling_reference_diagnostic():
    with pytest.raises(ParseError) as exc:
        parse_skd("edge E1 B:B1 B:B2\n")
    assert any("unknown branch point" in msg for _, _, msg in exc.value.diagnostics)


def test_bad_line_type_diagnostic():
    with pytest.raises(ParseError) as exc:
        parse_skd("triple T1 lines=bm,bm,mt\n")
    assert any("permutation" in msg for _, _, msg in exc.value.diagnostics)


def test_bad_endpoint_syntax():
    for bad in ("edge E1 T:T1.3.a B:B1\n", "edge E1 T:T1.0.c B:B1\n",
                "edge E1 X:T1 B:B1\n"):
        with pytest.raises(ParseError):
            parse_skd("triple T1 lines=bm,bt,mt\nbranch B1\n" + bad)


def test_unchecked_parse_returns_invalid_complex():
    doc = parse_skd_document("triple T1 lines=bm,bt,mt\n", check=False)
    assert len(doc.complex.triple_points) == 1


def test_oracle_section():
    doc = parse_skd_document("circle C1\noracle abc123 trivial\n")
    assert doc.oracle == {"abc123": "trivial"}
    with pytest.raises(ParseError):
        parse_skd_document("oracle abc123 maybe\n")


def test_triple_ids_may_contain_dots():
    cx = parse_skd("""triple T.1 lines=bm,bt,mt
edge E1 T:T.1.0.a T:T.1.0.b
edge E2 T:T.1.1.a T:T.1.1.b
edge E3 T:T.1.2.a T:T.1.2.b
""")
    assert "T.1" in cx.triples_by_id


# -- move scripts -----------------------------------------------------------


def test_parse_skm_trefoil_script():
    moves = parse_skm(fixture_text("trefoil_seq.skm"))
    assert [m.kind for m in moves] == [MoveKind.R1_PLUS, MoveKind.R6,
                                       MoveKind.R1_MINUS]
    assert isinstance(moves[0], R1Plus)
    assert moves[0].disk.partner_edge == "closed.2"
    assert moves[2].drop_disks == ("P9",)


def test_parse_skm_splice_and_lists():
    (move,) = parse_skm(
        "R2- t1=T1 t2=T2 curves=u1,v1 splice=T1.0.a:T1.0.b,T2.0.a:T2.0.b\n")
    assert isinstance(move, R2Minus)
    assert move.curves == ("u1", "v1")
    assert len(move.splice) == 2


def test_parse_skm_rejects_forbidden_kinds():
    with pytest.raises(ParseError) as exc:
        parse_skm("R1+ circle=c\nR2+ whatever=1\n")
    assert any("t-descendent" in msg for _, _, msg in exc.value.diagnostics)


def test_parse_skm_rejects_unknown_kind():
    with pytest.raises(ParseError):
        parse_skm("R9- t=T1\n")


def test_parse_skm_rejects_unknown_keys():
    with pytest.raises(ParseError) as exc:
        parse_skm("R6 disk=D1 extra=1\n")
    assert any("unknown key" in msg for _, _, msg in exc.value.diagnostics)


def test_parse_skm_rejects_missing_keys():
    with pytest.raises(ParseError) as exc:
        parse_skm("R2- t1=T1\n")
    assert any("missing key" in msg for _, _, msg in exc.value.diagnostics)


def test_parse_skm_incomplete_disk_declaration():
    with pytest.raises(ParseError) as exc:
        parse_skm("R1+ circle=c disk=P9\n")
    assert any("incomplete disk declaration" in msg
               for _, _, msg in exc.value.diagnostics)


# -- schematic --------------------------------------------------------------


def _dot_counts(dot: str) -> tuple[int, int]:
    nodes = sum(1 for line in dot.splitlines() if "[shape=" in line)
    edges = sum(1 for line in dot.splitlines() if " -- " in line)
    return nodes, edges


def test_schematic_single_circle():
    dot = export_schematic(parse_skd("circle C1\n"))
    assert '"C_C1" -- "C_C1"' in dot
    assert _dot_counts(dot) == (1, 1)


def test_schematic_trefoil(trefoil):
    dot = export_schematic(trefoil)
    rec = census(trefoil)
    nodes, edges = _dot_counts(dot)
    assert nodes == rec.triple_points + rec.branch_points + rec.circles
    assert edges == rec.arc_edges + rec.circles
    for t in trefoil.triple_points:
        assert f'"T_{t.id}"' in dot and "shape=triangle" in dot
    assert "0:mt 1:bm 2:bt" in dot
    # three curves, three distinct colors
    colors = {line.split("color ")[1] for line in dot.splitlines()
              if line.startswith("  // curve ")}
    assert len(colors) == 3
    for cid in ("closed", "open1", "open2"):
        assert f"({cid})" in dot


def test_schematic_counts_match_census_on_fixtures(r2, r3, r5, r6):
    for cx in (r2, r3, r5, r6):
        rec = census(cx)
        nodes, edges = _dot_counts(export_schematic(cx))
        assert nodes == rec.triple_points + rec.branch_points + rec.circles
        assert edges == rec.arc_edges + rec.circles


def test_derived_ids_are_deterministic(r2):
    from skdiag import apply_move
    from tests.conftest import r2_move
    a = apply_move(r2, r2_move())
    b = apply_move(r2, r2_move())
    assert fingerprint(a) == fingerprint(b)
    assert "s1.1" in a.edges_by_id
