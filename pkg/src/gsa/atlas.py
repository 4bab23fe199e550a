"""Group descriptors, the full component pipeline, and report emitters."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from dataclasses import asdict, dataclass, field

from gsa.congruence import (
    DEFAULT_CAP,
    congruence_verdict,
    criterion_A_any,
    monodromic_certificate,
)
from gsa.epi import DEFAULT_PAIR_BUDGET, enumerate_epi_ext, fiber_of
from gsa.mcg import (
    abs_components,
    decompose_components,
    monodromy_summary,
    signature,
    stabilizer_matrices,
)
from gsa.permgroup.families import (
    StandardGroup,
    is_prime,
    read_generator_file,
    standard_groups,
)

SCHEMA_VERSION = 1
DEFAULT_MAX_ORDER = 200_000


class SpecError(ValueError):
    pass


class CapError(RuntimeError):
    pass


class SchemaVersionError(ValueError):
    pass


class CacheCorrupt(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: tuple[int, ...] = ()
    path: str | None = None
    aut_source: str = "none"          # none | natural | file
    aut_path: str | None = None
    text: str = ""


_SPEC_RE = re.compile(r"^(?P<fam>[A-Za-z0-9]+):(?P<arg>[^@]+?)(?:@aut=(?P<aut>.+))?$")


def _int(s: str, what: str) -> int:
    s = s.strip()
    if not re.fullmatch(r"\d+", s):
        raise SpecError(f"{what} must be a positive integer, got {s!r}")
    return int(s)


def parse_group_spec(s: str) -> GroupSpec:
    """Parse ``Sn:n | An:n | D:2k | Z:nxm | SL2:p | PSL2:p | perm:path | named:NAME``
    with an optional ``@aut=natural|<path>`` suffix."""
    m = _SPEC_RE.match(s.strip())
    if not m:
        raise SpecError(f"cannot parse group spec {s!r}")
    fam, arg, aut = m.group("fam"), m.group("arg"), m.group("aut")
    aut_source, aut_path = "none", None
    if aut is not None:
        if aut == "natural":
            aut_source = "natural"
        elif aut:
            aut_source, aut_path = "file", aut
        else:
            raise SpecError("empty @aut= suffix")
    key = fam.lower()
    kw = dict(aut_source=aut_source, aut_path=aut_path, text=s.strip())
    if key == "sn":
        n = _int(arg, "n")
        if n < 2:
            raise SpecError("Sn needs n >= 2")
        return GroupSpec("Sn", (n,), **kw)
    if key == "an":
        n = _int(arg, "n")
        if n < 3:
            raise SpecError("An needs n >= 3")
        return GroupSpec("An", (n,), **kw)
    if key in ("d", "dih"):
        n = _int(arg, "dihedral order")
        if n % 2 or n < 4:
            raise SpecError(f"dihedral order must be even and >= 4, got {n}")
        return GroupSpec("Dih", (n,), **kw)
    if key == "z":
        parts = arg.lower().split("x")
        if len(parts) == 1:
            return GroupSpec("Cyc", (_int(parts[0], "n"),), **kw)
        if len(parts) != 2:
            raise SpecError(f"expected Z:<n>x<m>, got {s!r}")
        a, b = _int(parts[0], "n"), _int(parts[1], "m")
        if a < 1 or b < 1:
            raise SpecError("abelian factors must be positive")
        return GroupSpec("ZnSq" if a == b else "ZmZn", (a, b), **kw)
    if key in ("sl2", "psl2"):
        p = _int(arg, "p")
        if not is_prime(p):
            raise SpecError(f"{fam} needs a prime, got {p}")
        return GroupSpec("SL2" if key == "sl2" else "PSL2", (p,), **kw)
    if key == "perm":
        return GroupSpec("File", (), path=arg.strip(), **kw)
    if key == "named":
        return GroupSpec("Named", (), path=arg.strip(), **kw)
    raise SpecError(f"unknown group family {fam!r}")


@dataclass
class AtlasConfig:
    congruence_cap: int = DEFAULT_CAP
    max_order: int = DEFAULT_MAX_ORDER
    pair_budget: int = DEFAULT_PAIR_BUDGET
    threads: int = 1

    def key(self) -> str:
        return f"cap={self.congruence_cap};max={self.max_order};budget={self.pair_budget}"


@dataclass
class ComponentRow:
    id: str
    d: int
    c2: int
    c3: int
    minus_i: bool
    cusp_widths: list[int]
    genus: int
    level: int
    higman: dict
    congruence: dict
    monodromy: dict


@dataclass
class AbsRow:
    members: list[str]
    m: int
    abs_degree: int
    abs_monodromy: dict | None
    heuristic: bool


@dataclass
class AtlasReport:
    spec: str
    order: int
    components: list[ComponentRow] = field(default_factory=list)
    abs_grouping: list[AbsRow] = field(default_factory=list)
    auts_available: bool = False
    epi_count: int = 0
    two_generated: bool = True


def resolve_group(spec: GroupSpec) -> tuple[StandardGroup, list | None]:
    sg = standard_groups(spec)
    auts = None
    if spec.aut_source == "natural":
        auts = list(sg.natural_auts)
    elif spec.aut_source == "file":
        with open(spec.aut_path, encoding="utf-8") as fh:
            gens, extra = read_generator_file(fh.read())
        auts = gens + extra
        if any(len(a) != sg.group.degree for a in auts):
            raise SpecError("automorphism file degree does not match the group")
    return sg, auts


def _mono_dict(mi) -> dict:
    return {"class": mi.classification, "domain": mi.domain_size,
            "order_digits": mi.order_digits}


def run_atlas(spec: GroupSpec | str, config: AtlasConfig | None = None) -> AtlasReport:
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    config = config or AtlasConfig()
    sg, auts = resolve_group(spec)
    G = sg.group
    if G.order > config.max_order:
        raise CapError(f"|G| = {G.order} exceeds the configured maximum {config.max_order}")
    report = AtlasReport(spec.text, G.order, auts_available=auts is not None)
    classes = enumerate_epi_ext(G, budget=config.pair_budget)
    report.epi_count = len(classes)
    if not classes:
        report.two_generated = False
        return report
    comps = decompose_components(classes, G)
    fb = fiber_of(G)
    for k, c in enumerate(comps, 1):
        sig = signature(c)
        mono = monodromy_summary(c)
        certs = [x for x in (criterion_A_any(G, c.points), monodromic_certificate(mono, sig.level))
                 if x]
        c._cache["extra_certs"] = certs
        report.components.append(ComponentRow(
            id=f"C{k}", d=sig.d, c2=sig.c2, c3=sig.c3, minus_i=sig.minus_i,
            cusp_widths=list(sig.cusp_widths), genus=sig.genus, level=sig.level,
            higman={"order": c.commutator_class.element_order,
                    "class_size": c.commutator_class.size,
                    "label": c.commutator_class.label},
            congruence={}, monodromy=_mono_dict(mono),
        ))
    groups = abs_components(comps, auts, G)
    # abs monodromy may supply a further certificate for every member
    for a in groups:
        cert = monodromic_certificate(a.monodromy) if a.monodromy else None
        for i in a.members:
            if cert and cert not in comps[i]._cache["extra_certs"]:
                comps[i]._cache["extra_certs"].append(cert)
        report.abs_grouping.append(AbsRow(
            members=[report.components[i].id for i in a.members], m=a.m,
            abs_degree=a.abs_degree,
            abs_monodromy=_mono_dict(a.monodromy) if a.monodromy else None,
            heuristic=a.heuristic))
    for c, row in zip(comps, report.components):
        sig = signature(c)
        rep = congruence_verdict(sig, stabilizer_matrices(c), config.congruence_cap,
                                 certificates=c._cache["extra_certs"])
        row.congruence = {"e": rep.congruence_degree_e, "f": rep.congruence_deficiency_f,
                          "verdict": rep.verdict, "certificates": rep.certificates,
                          "modulus": rep.modulus,
                          "totally_noncongruence": rep.totally_noncongruence}
    return report


# serialisation -----------------------------------------------------------

def report_to_json(report: AtlasReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "group": {"spec": report.spec, "order": str(report.order)},
        "epi_count": report.epi_count,
        "auts_available": report.auts_available,
        "components": [asdict(r) for r in report.components],
        "abs_components": [asdict(a) for a in report.abs_grouping],
    }


def report_from_json(data: dict) -> AtlasReport:
    if not isinstance(data, dict) or "schema_version" not in data:
        raise CacheCorrupt("missing schema_version")
    if data["schema_version"] != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"cache schema_version {data['schema_version']!r}, expected {SCHEMA_VERSION}")
    try:
        rep = AtlasReport(data["group"]["spec"], int(data["group"]["order"]))
        rep.components = [ComponentRow(**r) for r in data["components"]]
        rep.abs_grouping = [AbsRow(**a) for a in data.get("abs_components", [])]
        rep.auts_available = bool(data.get("auts_available", False))
        rep.epi_count = int(data.get("epi_count", sum(r.d for r in rep.components)))
        rep.two_generated = bool(rep.components) or rep.order == 1
    except (KeyError, TypeError, ValueError) as exc:
        raise CacheCorrupt(f"malformed cache: {exc}") from exc
    return rep


def dump_report(report: AtlasReport) -> str:
    return json.dumps(report_to_json(report), indent=2, sort_keys=True) + "\n"


def save_report(report: AtlasReport, path: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(dump_report(report))
    os.replace(tmp, path)


def load_report(path: str) -> AtlasReport:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CacheCorrupt(f"{path}: {exc}") from exc
    return report_from_json(data)


def cache_roundtrip(report: AtlasReport, path: str) -> AtlasReport:
    save_report(report, path)
    back = load_report(path)
    if report_to_json(back) != report_to_json(report):
        raise CacheCorrupt("reloaded report differs from the original")
    return back


def cache_path(cache_dir: str, spec: str, config: AtlasConfig) -> str:
    import hashlib

    h = hashlib.blake2b(f"{spec}|{config.key()}".encode(), digest_size=10).hexdigest()
    return os.path.join(cache_dir, f"atlas-{h}.json")


# emitters ---------------------------------------------------------------

def widths_str(widths) -> str:
    from collections import Counter

    c = Counter(widths)
    return " ".join(f"{w}^{c[w]}" for w in sorted(c))


def _mono_str(md: dict | None) -> str:
    if md is None:
        return "-"
    return f"{md['class']}({md['domain']})"


def _verdict_str(v: str) -> str:
    return {"congruence": "cng", "noncongruence": "ncng", "skipped_cap": "skip"}[v]


def table_rows(report: AtlasReport) -> list[dict]:
    """One row per Out-orbit of components (or heuristic group)."""
    by_id = {r.id: r for r in report.components}
    rows = []
    for a in report.abs_grouping:
        members = [by_id[i] for i in a.members]
        r0 = members[0]
        verdicts = sorted({_verdict_str(m.congruence["verdict"]) for m in members})
        certs = sorted({c for m in members for c in m.congruence["certificates"]})
        rows.append({
            "count": a.m, "d": r0.d, "c2": r0.c2, "c3": r0.c3,
            "minus_i": r0.minus_i, "widths": widths_str(r0.cusp_widths), "g": r0.genus,
            "hig": ",".join(sorted(m.higman["label"] for m in members)),
            "level": r0.level,
            "e": r0.congruence["e"], "f": r0.congruence["f"],
            "absmon": _mono_str(a.abs_monodromy or r0.monodromy),
            "verdict": "/".join(verdicts), "certificates": certs,
            "members": a.members,
        })
    rows.sort(key=lambda r: (r["d"], min(int(i[1:]) for i in r["members"])))
    return rows


def emit_markdown(report: AtlasReport) -> str:
    head = "m" if report.auts_available else "components"
    out = [f"## {report.spec} (|G| = {report.order}, |Epi^ext| = {report.epi_count})", ""]
    if not report.two_generated:
        out.append("G is not generated by two elements: no components.")
        return "\n".join(out) + "\n"
    out.append(f"| {head} | d | c2 | c3 | -I | cusp widths | g | Hig | l | e | f "
               f"| AbsMon | c/nc |")
    out.append("|" + "---|" * 13)
    for r in table_rows(report):
        e = "-" if r["e"] is None else r["e"]
        f = "-" if r["f"] is None else r["f"]
        out.append(f"| {r['count']} | {r['d']} | {r['c2']} | {r['c3']} | "
                   f"{1 if r['minus_i'] else 0} | {r['widths']} | {r['g']} | {r['hig']} | "
                   f"{r['level']} | {e} | {f} | {r['absmon']} | {r['verdict']} |")
    out.append("")
    out.append("Higman labels are order plus a letter ranked by class size and least "
               "element; only the order and the class sizes are comparable across tools.")
    if not report.auts_available:
        out.append("Rows group components with equal signature and Higman order "
                   "(heuristic; no automorphisms supplied).")
    return "\n".join(out) + "\n"


def parse_markdown_table(text: str) -> list[dict]:
    """Read back the rows of :func:`emit_markdown`."""
    rows = []
    header = None
    for line in text.splitlines():
        if not line.startswith("|") or line.startswith("|---"):
            continue
        cells = [c.strip() for c in line.strip().strip("|").split("|")]
        if header is None:
            header = cells
            continue
        rows.append(dict(zip(header, cells)))
    return rows


CSV_FIELDS = ["id", "d", "c2", "c3", "minus_i", "cusp_widths", "genus", "level",
              "higman_order", "higman_class_size", "higman_label", "e", "f", "verdict",
              "certificates", "mon_class", "mon_domain", "group_members", "m",
              "abs_degree", "abs_mon_class"]


def emit_csv(report: AtlasReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    group_of = {}
    for a in report.abs_grouping:
        for i in a.members:
            group_of[i] = a
    for r in report.components:
        a = group_of.get(r.id)
        w.writerow([r.id, r.d, r.c2, r.c3, int(r.minus_i), widths_str(r.cusp_widths),
                    r.genus, r.level, r.higman["order"], r.higman["class_size"],
                    r.higman["label"], r.congruence["e"], r.congruence["f"],
                    r.congruence["verdict"], ";".join(r.congruence["certificates"]),
                    r.monodromy["class"], r.monodromy["domain"],
                    " ".join(a.members) if a else "", a.m if a else "",
                    a.abs_degree if a else "",
                    a.abs_monodromy["class"] if a and a.abs_monodromy else ""])
    return buf.getvalue()


def emit(report: AtlasReport, fmt: str) -> str:
    if fmt == "md":
        return emit_markdown(report)
    if fmt == "csv":
        return emit_csv(report)
    if fmt == "json":
        return dump_report(report)
    raise ValueError(f"unknown format {fmt!r}")


def degree_check(report: AtlasReport) -> bool:
    return sum(r.d for r in report.components) == report.epi_count


def lcm_all(xs) -> int:
    return math.lcm(*xs) if xs else 1
