"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run under pytest (the lines are repeated in the terminal summary) or directly:
``python3 tests/test_acceptance.py [--tier stretch]``.
"""

from __future__ import annotations

import functools
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import record  # noqa: E402
from golden import (  # noqa: E402
    certified_table, diff, emitted_table, load_golden, reference_components, reference_table, report_components,
    signature_sane, verdicts_consistent,
)
from gsa.atlas import AtlasConfig, run_atlas  # noqa: E402
from gsa.congruence import image_order_mod, sl2_group_order_mod, subgroup_index_mod  # noqa: E402
from gsa.epi import Homomorphism, canonical_form, enumerate_epi_ext, higman_invariant, push_forward  # noqa: E402
from gsa.markoff import (  # noqa: E402
    MOVES, apply_markoff_move, crosscheck_epi_bijection, markoff_orbits, markoff_points,
)
from gsa.mcg import component_pushforward, decompose_components, signature, stabilizer_matrices  # noqa: E402
from gsa.permgroup import abelian, dihedral, psl2, sl2, symmetric  # noqa: E402
from gsa.permgroup.families import is_prime, standard_groups  # noqa: E402

GOLDEN = load_golden()
SMALL_TABLES = ["D:6@aut=natural", "D:8@aut=natural", "D:10@aut=natural"]
LARGE_TABLES = ["SL2:3@aut=natural", "Sn:4@aut=natural", "An:5@aut=natural",
                "PSL2:7@aut=natural", "SL2:7@aut=natural"]
ABELIAN = [f"Z:{n}x{n}" for n in (2, 3, 4, 5)]
ACCEPTANCE_GROUPS = SMALL_TABLES + LARGE_TABLES + ABELIAN


@functools.lru_cache(maxsize=None)
def atlas(spec: str):
    return run_atlas(spec)


@functools.lru_cache(maxsize=None)
def components(spec: str):
    G = standard_groups(spec).group
    return G, decompose_components(enumerate_epi_ext(G), G)


def _check(fn, name, limit):
    t0 = time.perf_counter()
    problems = []
    try:
        fn(problems)
    except Exception as exc:        # reported as a failed criterion, then re-raised
        problems.append(f"{type(exc).__name__}: {exc}")
        record(name, False, time.perf_counter() - t0, limit, "; ".join(problems))
        raise
    dt = time.perf_counter() - t0
    status = record(name, not problems, dt, limit, "; ".join(problems))
    assert not problems, problems
    assert status == "PASS", f"{name} exceeded its time limit: {dt:.2f} s"


# 1 -----------------------------------------------------------------------

def _c1(problems):
    for spec in SMALL_TABLES:
        d = diff(reference_table(GOLDEN[spec]), emitted_table(atlas(spec)))
        if d:
            problems.append(f"{spec}: {d}")


def test_criterion_1_dihedral_tables():
    _check(_c1, "1 dihedral tables D6 D8 D10", 1.0)


# 2 -----------------------------------------------------------------------

def _c2(problems):
    genera = set()
    for spec in LARGE_TABLES:
        rep = atlas(spec)
        d = diff(reference_table(GOLDEN[spec]), emitted_table(rep))
        if d:
            problems.append(f"{spec}: {d}")
        genera |= {c.genus for c in rep.components}
    degs = {s: sorted(c.d for c in atlas(s).components) for s in LARGE_TABLES[-2:]}
    if degs["PSL2:7@aut=natural"] != [7, 7, 32, 32, 36]:
        problems.append(f"PSL2(7) degrees {degs['PSL2:7@aut=natural']}")
    if degs["SL2:7@aut=natural"] != [28, 28, 128, 128, 144]:
        problems.append(f"SL2(7) degrees {degs['SL2:7@aut=natural']}")
    if genera != {0, 1}:
        problems.append(f"genera {sorted(genera)}")
    for spec in LARGE_TABLES:
        if any(c.congruence["verdict"] != "noncongruence" for c in atlas(spec).components):
            problems.append(f"{spec}: a verdict other than ncng")


def test_criterion_2_simple_and_sl2_tables():
    _check(_c2, "2 tables SL2(3) S4 A5 PSL2(7) SL2(7)", 60.0)


# 3 -----------------------------------------------------------------------

def _c3(problems):
    G, cg = components("SL2:7")
    H, ch = components("PSL2:7")
    q = Homomorphism(G, H, H._gens)
    img = component_pushforward(q, cg, ch)
    if len(cg) != 5 or len(ch) != 5 or sorted(img) != list(range(5)):
        problems.append(f"map on components {img}")
    for i, j in enumerate(img):
        a, b = signature(cg[i]), signature(ch[j])
        if a.d_bar % b.d_bar or a.d % b.d:
            problems.append(f"degree {a.d} over {b.d}")


def test_criterion_3_pushforward_bijection():
    _check(_c3, "3 SL2(7) -> PSL2(7) bijection on components", 60.0)


# 4 -----------------------------------------------------------------------

def _c4(problems):
    from math import gcd

    for n, spec in zip((2, 3, 4, 5), ABELIAN):
        rep = atlas(spec)
        phi = sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)
        if len(rep.components) != phi:
            problems.append(f"{spec}: {len(rep.components)} components, want {phi}")
        for c in rep.components:
            if c.d != sl2_group_order_mod(n) or c.genus != 0:
                problems.append(f"{spec}: d={c.d} g={c.genus}")
            if c.congruence["verdict"] != "congruence" or c.congruence["f"] != 1:
                problems.append(f"{spec}: verdict {c.congruence['verdict']} f={c.congruence['f']}")


def test_criterion_4_abelian_control():
    _check(_c4, "4 abelian (Z/n)^2 control n=2..5", 10.0)


# 5 -----------------------------------------------------------------------

def _c5(problems):
    (c6,) = components("D:6")[1]
    (c8,) = components("D:8")[1]
    m6, m8 = stabilizer_matrices(c6), stabilizer_matrices(c8)
    got = (sl2_group_order_mod(4), image_order_mod(m6, 4), subgroup_index_mod(m6, 4),
           subgroup_index_mod(m8, 4))
    if got != (48, 16, 3, 6):
        problems.append(f"(|SL2(Z/4)|, |image D6|, index D6, index D8) = {got}")


def test_criterion_5_congruence_mechanics():
    _check(_c5, "5 congruence mechanics mod 4 (D6 index 3, D8 index 6)", 1.0)


# 6 -----------------------------------------------------------------------

def _c6(problems):
    for p in (p for p in range(5, 200) if is_prime(p)):
        r = markoff_orbits(p)
        want = p * (p + 3) if p % 4 == 1 else p * (p - 3)
        if r.point_count != want:
            problems.append(f"p={p}: {r.point_count} points, want {want}")
        if not r.transitive_out:
            problems.append(f"p={p}: Out not transitive ({r.out_orbit_sizes})")
        if p <= 97 and not r.divisibility_ok:
            problems.append(f"p={p}: Out+ orbits {r.out_plus_orbit_sizes}")


def test_criterion_6_markoff_counts():
    _check(_c6, "6 Markoff counts, transitivity, divisibility", 30.0)


# 7 -----------------------------------------------------------------------

def _c7(problems):
    for p, want in ((3, 0), (5, 40), (7, 28)):
        cc = crosscheck_epi_bijection(p)
        if cc != {"markoff_count": want, "epi_trace_count": want}:
            problems.append(f"p={p}: {cc}")


def test_criterion_7_trace_crosscheck():
    _check(_c7, "7 trace bijection crosscheck p=3,5,7", 120.0)


# 8 -----------------------------------------------------------------------

def _quotients():
    out = []
    for p in (3, 5, 7):
        G, H = sl2(p).group, psl2(p).group
        out.append((G, H, H._gens))
    V4 = abelian(2, 2).group
    out.append((dihedral(8).group, V4, V4._gens))
    pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    keys = [frozenset(map(frozenset, pr)) for pr in pairings]

    def on_pairings(g):
        return tuple(keys.index(frozenset(frozenset(g[i] for i in pr) for pr in pairs))
                     for pairs in pairings)

    S4 = symmetric(4).group
    out.append((S4, symmetric(3).group, [on_pairings(g) for g in S4._gens]))
    return out


def _c8(problems):
    for spec in ACCEPTANCE_GROUPS:
        rep = atlas(spec)
        if not signature_sane(rep):
            problems.append(f"{spec}: signature or partition sum")
        if not verdicts_consistent(rep):
            problems.append(f"{spec}: certificate beside a congruence verdict")
        G, comps = components(spec.split("@")[0])
        for c in comps:
            if len({higman_invariant(G, e).commutator_class.index for e in c.points}) != 1:
                problems.append(f"{spec}: Higman invariant varies")
            pos = {e: i for i, e in enumerate(c.points)}
            inv = [pos[canonical_form((e.canonical_pair[0].inverse(), e.canonical_pair[1].inverse()), G)]
                   for e in c.points]
            if not np.array_equal(c.sigma_v[c.sigma_v], inv):
                problems.append(f"{spec}: V^2 differs from inversion")
    for G, H, imgs in _quotients():
        q = Homomorphism(G, H, imgs)
        if {push_forward(e, q) for e in enumerate_epi_ext(G)} != set(enumerate_epi_ext(H)):
            problems.append(f"Gaschutz fails for |G|={G.order} -> |H|={H.order}")
    rng = np.random.default_rng(7)
    for p in (5, 7, 11, 13, 97, 199):
        pts = markoff_points(p)
        for k in rng.integers(0, len(pts), 50).tolist():
            t = pts[k]
            for m in MOVES:
                u = apply_markoff_move(t, m, p)
                if not u.satisfies(p) or apply_markoff_move(u, m, p) != t:
                    problems.append(f"move {m} at {t} mod {p}")


def test_criterion_8_property_suites():
    _check(_c8, "8 property suites on every acceptance group", None)


# 9 (stretch) -----------------------------------------------------------------

def _stretch(spec, problems, want_count=None, only_degree_one=False):
    rep = run_atlas(spec, AtlasConfig())
    gold = GOLDEN[spec.split("@")[0]]
    if want_count is not None and len(rep.components) != want_count:
        problems.append(f"{spec}: {len(rep.components)} components, want {want_count}")
    if only_degree_one:
        ones = [c for c in rep.components if c.d == 1]
        if len(ones) != 4 or any(c.congruence["verdict"] != "congruence" for c in ones):
            problems.append(f"{spec}: degree-1 components {[(c.d, c.congruence['verdict']) for c in ones]}")
    d = diff(reference_components(gold), report_components(rep))
    if d:
        problems.append(f"{spec}: {d}")
    d = diff(reference_table(gold, absmon=False), certified_table(rep))
    if d:
        problems.append(f"{spec} rows: {d}")
    if not signature_sane(rep) or not verdicts_consistent(rep):
        problems.append(f"{spec}: sanity")
    for c in rep.components:
        if c.congruence["verdict"] == "skipped_cap" and not c.congruence["certificates"]:
            problems.append(f"{spec}: skipped row of degree {c.d} carries no certificate")
    return rep


@pytest.mark.stretch
def test_criterion_9_m11():
    def run(problems):
        rep = _stretch("named:M11@aut=natural", problems, want_count=12)
        if max(c.d for c in rep.components) != 1380:
            problems.append("max degree")
    _check(run, "9a stretch M11", 30 * 60.0)


@pytest.mark.stretch
def test_criterion_9_sz8():
    _check(lambda pr: _stretch("named:Sz8@aut=natural", pr, want_count=42),
           "9b stretch Sz(8)", 4 * 3600.0)


@pytest.mark.stretch
def test_criterion_9_psu3_4():
    _check(lambda pr: _stretch("named:PSU3_4@aut=natural", pr, want_count=33, only_degree_one=True),
           "9c stretch PSU3(4)", 8 * 3600.0)


def main(argv) -> int:
    tests = [test_criterion_1_dihedral_tables, test_criterion_2_simple_and_sl2_tables,
             test_criterion_3_pushforward_bijection, test_criterion_4_abelian_control,
             test_criterion_5_congruence_mechanics, test_criterion_6_markoff_counts,
             test_criterion_7_trace_crosscheck, test_criterion_8_property_suites]
    if "--tier" in argv and argv[argv.index("--tier") + 1] == "stretch":
        tests += [test_criterion_9_m11, test_criterion_9_sz8, test_criterion_9_psu3_4]
    failed = 0
    for t in tests:
        try:
            t()
        except Exception:
            failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
