from __future__ import annotations

import json
import os

import pytest

from golden import (
    diff, emitted_table, load_golden, reference_components, reference_table, report_components,
    signature_sane, verdicts_consistent,
)
from gsa.atlas import (
    AtlasConfig, CacheCorrupt, CapError, SchemaVersionError, SpecError, cache_roundtrip,
    dump_report, emit, load_report, parse_group_spec, parse_markdown_table, run_atlas,
    save_report,
)

GOLDEN = load_golden()
TABLE_GROUPS = ["D:6@aut=natural", "D:8@aut=natural", "D:10@aut=natural", "SL2:3@aut=natural",
                "Sn:4@aut=natural", "An:5@aut=natural", "PSL2:7@aut=natural", "SL2:7@aut=natural"]


def test_parse_examples():
    g = parse_group_spec("D:10")
    assert (g.family, g.params, g.aut_source) == ("Dih", (10,), "none")
    g = parse_group_spec("SL2:7@aut=natural")
    assert (g.family, g.params, g.aut_source) == ("SL2", (7,), "natural")
    assert parse_group_spec("Z:3x3").family == "ZnSq"
    assert parse_group_spec("Z:2x4").family == "ZmZn"
    assert parse_group_spec("perm:gens.txt@aut=auts.txt").aut_path == "auts.txt"
    for bad in ("D:7", "SL2:8", "PSL2:1", "Q:3", "nonsense", "Sn:x", "Sn:4@aut="):
        with pytest.raises(SpecError):
            parse_group_spec(bad)


@pytest.mark.parametrize("spec", TABLE_GROUPS)
def test_golden_tables(spec):
    report = run_atlas(spec)
    assert diff(reference_table(GOLDEN[spec]), emitted_table(report)) == ""
    assert diff(reference_components(GOLDEN[spec]), report_components(report)) == ""
    assert signature_sane(report) and verdicts_consistent(report)


def test_examples_without_auts():
    r = run_atlas("D:8")
    (c,) = r.components
    assert (c.d, c.c2, c.c3, c.minus_i, c.cusp_widths, c.genus, c.higman["label"]) == \
        (6, 0, 0, True, [2, 2, 2], 0, "2A")
    assert c.congruence["verdict"] == "congruence"
    r = run_atlas("An:5")
    assert sorted(c.d for c in r.components) == [10, 10, 18]
    assert all(c.congruence["verdict"] == "noncongruence" for c in r.components)
    text = emit(r, "md")
    assert "| components |" in text and "heuristic" in text


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_abelian_control(n):
    from oracles import _phi, sl2_order_bruteforce

    r = run_atlas(f"Z:{n}x{n}")
    assert len(r.components) == _phi(n)
    for c in r.components:
        assert c.d == sl2_order_bruteforce(n)
        assert c.congruence["verdict"] == "congruence" and c.congruence["f"] == 1
        assert c.genus == 0


def test_not_two_generated():
    r = run_atlas("Z:1x1")
    assert len(r.components) == 1
    from gsa.atlas import emit_markdown
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        p = os.path.join(d, "gens.txt")
        with open(p, "w") as fh:
            fh.write("(1 2)\n(3 4)\n(5 6)\n")
        r = run_atlas(f"perm:{p}")
    assert r.components == [] and not r.two_generated
    assert "not generated by two elements" in emit_markdown(r)


def test_cap_error():
    with pytest.raises(CapError):
        run_atlas("SL2:7", AtlasConfig(max_order=100))


def test_congruence_cap_skip():
    r = run_atlas("Sn:4", AtlasConfig(congruence_cap=8))
    (c,) = r.components
    assert c.congruence["verdict"] == "skipped_cap" and c.congruence["e"] is None
    assert "skip" in emit(r, "md")


def test_cache_roundtrip(tmp_path):
    r = run_atlas("D:6")
    back = cache_roundtrip(r, str(tmp_path / "d6.json"))
    assert dump_report(back) == dump_report(r)


def test_cache_version_and_corruption(tmp_path):
    r = run_atlas("D:6")
    p = tmp_path / "d6.json"
    save_report(r, str(p))
    data = json.loads(p.read_text())
    assert data["schema_version"] == 1
    assert set(data["components"][0]) >= {"d", "c2", "c3", "minus_i", "cusp_widths", "genus",
                                          "level", "higman", "congruence", "monodromy"}
    data["schema_version"] = 2
    p.write_text(json.dumps(data))
    with pytest.raises(SchemaVersionError):
        load_report(str(p))
    p.write_text(dump_report(r)[:-40])
    with pytest.raises(CacheCorrupt):
        load_report(str(p))
    p.write_text(json.dumps({"schema_version": 1, "group": {}}))
    with pytest.raises(CacheCorrupt):
        load_report(str(p))


def test_deterministic_output():
    a = run_atlas("SL2:3@aut=natural")
    b = run_atlas("SL2:3@aut=natural", AtlasConfig(threads=4))
    for fmt in ("md", "csv", "json"):
        assert emit(a, fmt) == emit(b, fmt)


def test_markdown_round_trip():
    r = run_atlas("D:10@aut=natural")
    rows = parse_markdown_table(emit(r, "md"))
    assert rows == [{"m": "2", "d": "3", "c2": "1", "c3": "0", "-I": "1", "cusp widths": "1^1 2^1",
                     "g": "0", "Hig": "5A,5B", "l": "2", "e": "3", "f": "1", "AbsMon": "Sym(3)",
                     "c/nc": "cng"}]


def test_csv_rows():
    text = emit(run_atlas("An:5@aut=natural"), "csv")
    lines = text.splitlines()
    assert lines[0].startswith("id,d,c2,c3,minus_i,cusp_widths")
    assert len(lines) == 4
