"""Comparison of atlas output with the tables transcribed in golden/reference_tables.json."""

from __future__ import annotations

import json
import os
import re
from collections import Counter

from gsa.atlas import AtlasReport, emit_markdown, parse_markdown_table, table_rows, widths_str

HERE = os.path.dirname(__file__)


def load_golden() -> dict:
    with open(os.path.join(HERE, "golden", "reference_tables.json"), encoding="utf-8") as fh:
        return json.load(fh)["groups"]


def _order(hig: str) -> int:
    return int(re.match(r"\d+", hig).group())


def reference_components(rows) -> Counter:
    """One entry per component: signature plus Higman order."""
    out = Counter()
    for r in rows:
        key = (r["d"], r["c2"], r["c3"], r["minus_i"], r["cusp_widths"], r["genus"], r["hig_order"])
        out[key] += r["m"]
    return out


def report_components(report: AtlasReport) -> Counter:
    return Counter((c.d, c.c2, c.c3, int(c.minus_i), widths_str(c.cusp_widths), c.genus,
                    c.higman["order"]) for c in report.components)


def reference_table(rows, absmon: bool = True) -> Counter:
    return Counter((r["m"], r["d"], r["c2"], r["c3"], r["minus_i"], r["cusp_widths"], r["genus"],
                    r["hig_order"], r["verdict"]) + ((r["absmon_display"],) if absmon else ())
                   for r in rows)


def emitted_table(report: AtlasReport, absmon: bool = True) -> Counter:
    rows = parse_markdown_table(emit_markdown(report))
    head = "m" if report.auts_available else "components"
    return Counter((int(r[head]), int(r["d"]), int(r["c2"]), int(r["c3"]), int(r["-I"]),
                    r["cusp widths"], int(r["g"]), _order(r["Hig"]), r["c/nc"])
                   + ((r["AbsMon"],) if absmon else ()) for r in rows)


def certified_table(report: AtlasReport) -> Counter:
    """Rows without AbsMon; a capped row counts as ncng only if it carries a certificate."""
    out = Counter()
    for r in table_rows(report):
        v = r["verdict"]
        if v == "skip" and r["certificates"]:
            v = "ncng"
        out[(r["count"], r["d"], r["c2"], r["c3"], int(r["minus_i"]), r["widths"], r["g"],
             _order(r["hig"]), v)] += 1
    return out


def diff(want: Counter, got: Counter) -> str:
    missing = want - got
    extra = got - want
    if not missing and not extra:
        return ""
    return f"missing {sorted(missing.elements())}; unexpected {sorted(extra.elements())}"


def verdicts_consistent(report: AtlasReport) -> bool:
    """A fired certificate never sits next to a congruence verdict."""
    return all(not (c.congruence["certificates"] and c.congruence["verdict"] == "congruence")
               for c in report.components)


def signature_sane(report: AtlasReport) -> bool:
    for c in report.components:
        d_bar = c.d if c.minus_i else c.d // 2
        if sum(c.cusp_widths) != d_bar or (d_bar - c.c2) % 2 or (d_bar - c.c3) % 3:
            return False
        if c.genus < 0:
            return False
    return sum(c.d for c in report.components) == report.epi_count
