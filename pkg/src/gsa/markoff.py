"""Markoff triples mod p: x^2 + y^2 + z^2 - xyz = 0 over F_p, minus the origin.

The three generating moves are the Vieta involution R3 and two coordinate
swaps. Each abelianises to a matrix of determinant -1, so the
orientation-preserving subgroup is reached by words of even length. Its
orbits are read off from the doubled graph on (point, parity) states.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from gsa.permgroup.families import is_prime

MOVES = ("R3", "Tau12", "Tau23")
# abelianised determinant of each move, used for the parity bookkeeping
MOVE_DET = {"R3": -1, "Tau12": -1, "Tau23": -1}
CROSSCHECK_MAX_P = 13


@dataclass(frozen=True, order=True)
class MarkoffTriple:
    x: int
    y: int
    z: int

    def satisfies(self, p: int) -> bool:
        x, y, z = self.x, self.y, self.z
        return (x * x + y * y + z * z - x * y * z) % p == 0


def _check_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


def _sqrt_table(p: int) -> np.ndarray:
    """root[a] = some r with r^2 = a mod p, or -1 for non-squares."""
    root = np.full(p, -1, dtype=np.int64)
    r = np.arange(p, dtype=np.int64)
    # keep the smaller root for determinism
    sq = r * r % p
    root[sq[::-1]] = r[::-1]
    return root


def point_array(p: int) -> np.ndarray:
    """All nonzero solutions as an (N, 3) array, sorted lexicographically."""
    _check_prime(p)
    root = _sqrt_table(p)
    x, y = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    x, y = x.ravel(), y.ravel()
    b = x * y % p
    disc = (b * b - 4 * (x * x + y * y)) % p
    r = root[disc]
    ok = r >= 0
    half = (p + 1) // 2   # inverse of 2
    x, y, b, r = x[ok], y[ok], b[ok], r[ok]
    z1 = (b + r) * half % p
    z2 = (b - r) * half % p
    pts = np.concatenate([np.stack([x, y, z1], 1), np.stack([x, y, z2], 1)])
    pts = np.unique(pts, axis=0)
    pts = pts[np.any(pts != 0, axis=1)]
    return pts


def markoff_points(p: int) -> list[MarkoffTriple]:
    return [MarkoffTriple(*map(int, t)) for t in point_array(p)]


def apply_markoff_move(t: MarkoffTriple, m: str, p: int) -> MarkoffTriple:
    if m == "R3":
        return MarkoffTriple(t.x, t.y, (t.x * t.y - t.z) % p)
    if m == "Tau12":
        return MarkoffTriple(t.y, t.x, t.z)
    if m == "Tau23":
        return MarkoffTriple(t.x, t.z, t.y)
    raise ValueError(f"unknown move {m!r}")


def _move_arrays(pts: np.ndarray, p: int) -> list[np.ndarray]:
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    images = [np.stack([x, y, (x * y - z) % p], 1),
              np.stack([y, x, z], 1),
              np.stack([x, z, y], 1)]
    keys = (pts[:, 0] * p + pts[:, 1]) * p + pts[:, 2]   # sorted, since pts is
    out = []
    for img in images:
        k = (img[:, 0] * p + img[:, 1]) * p + img[:, 2]
        i = np.searchsorted(keys, k)
        if np.any(i >= len(keys)) or not np.array_equal(keys[np.minimum(i, len(keys) - 1)], k):
            raise AssertionError("move left the Markoff surface")
        out.append(i)
    return out


def _components(perms: list[np.ndarray], n: int) -> np.ndarray:
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rows = np.concatenate([np.arange(n)] * len(perms))
    cols = np.concatenate(perms)
    A = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    return connected_components(A, directed=True, connection="weak")[1]


@dataclass
class MarkoffReport:
    p: int
    point_count: int
    out_orbit_sizes: list[int]
    out_plus_orbit_sizes: list[int]
    transitive_out: bool
    strong_approx: bool
    divisibility_ok: bool
    out_orbit_of: np.ndarray = field(repr=False, default=None)


def markoff_orbits(p: int) -> MarkoffReport:
    pts = point_array(p)
    n = len(pts)
    moves = _move_arrays(pts, p)
    for m in moves:
        if not np.array_equal(m[m], np.arange(n)):
            raise AssertionError("moves are not involutions")
    lab = _components(moves, n)
    out_sizes = sorted(np.bincount(lab).tolist()) if n else []

    # doubled graph: state (i, s) -> (move(i), s ^ 1) since every det is -1
    assert all(MOVE_DET[m] == -1 for m in MOVES)
    dbl = [np.concatenate([m + n, m]) for m in moves]
    lab2 = _components(dbl, 2 * n)
    plus_sizes = sorted(np.bincount(lab2[:n]).tolist()) if n else []
    plus_sizes = [s for s in plus_sizes if s > 0]
    # an Out-orbit splits into at most two Out+ orbits
    per_out = np.bincount(lab[np.unique(lab2[:n], return_index=True)[1]]) if n else []
    if n and per_out.max() > 2:
        raise AssertionError("an Out-orbit split into more than two Out+ orbits")
    transitive = n > 0 and len(out_sizes) == 1
    div = all(s % p == 0 for s in plus_sizes)
    # (3, 3, 3) is an integral point; it survives reduction iff p != 3
    sa = transitive and 3 % p != 0
    return MarkoffReport(p, n, out_sizes, plus_sizes, transitive, sa, div, lab)


def strong_approximation_report(p: int) -> tuple[bool, str]:
    if p in (2, 3):
        raise ValueError("strong approximation report needs p >= 5")
    rep = markoff_orbits(p)
    ok = rep.strong_approx
    if ok:
        text = (f"p={p}: the {rep.point_count} points form a single orbit, and the integral "
                f"point (3,3,3) reduces to a nonzero point, so reduction mod {p} of the "
                f"integral orbit is onto.")
    else:
        text = (f"p={p}: {len(rep.out_orbit_sizes)} orbits of sizes {rep.out_orbit_sizes}; "
                f"reduction of the integral orbit is not onto.")
    return ok, text


def sweep_csv(primes, out=None) -> str:
    buf = io.StringIO() if out is None else out
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "point_count", "n_orbits_out", "n_orbits_out_plus", "max_orbit",
                "transitive", "divisibility_ok"])
    for p in primes:
        r = markoff_orbits(p)
        w.writerow([p, r.point_count, len(r.out_orbit_sizes), len(r.out_plus_orbit_sizes),
                    max(r.out_orbit_sizes, default=0), str(r.transitive_out).lower(),
                    str(r.divisibility_ok).lower()])
    return buf.getvalue() if out is None else ""


def crosscheck_epi_bijection(p: int, max_p: int = CROSSCHECK_MAX_P) -> dict:
    """Compare |X*(p)| with GL2(F_p)-classes of generating pairs with tr[B, A] = -2."""
    _check_prime(p)
    if p > max_p:
        raise ValueError(f"crosscheck is limited to p <= {max_p}")
    from gsa.epi import commutator_index, enumerate_epi_ext, fiber_of
    from gsa.mcg import FiberIndex
    from gsa.permgroup.elements import orbits_of
    from gsa.permgroup.families import matrix_of_vector_perm, sl2

    sg = sl2(p)
    G = sg.group
    classes = enumerate_epi_ext(G)
    fb = fiber_of(G)
    idx = FiberIndex(fb, classes)
    comm = commutator_index(fb, idx.xs, idx.ys)
    trace = np.empty(len(comm), dtype=np.int64)
    tr_of = {}
    for j, c in enumerate(comm.tolist()):
        if c not in tr_of:
            M = matrix_of_vector_perm(fb.T.perm(c), p)
            tr_of[c] = (M[0][0] + M[1][1]) % p
        trace[j] = tr_of[c]
    sel = trace == (-2) % p
    fold = orbits_of([idx.aut_perm(a) for a in sg.natural_auts], len(classes))
    epi_count = len(np.unique(fold[sel]))
    # the trace condition is invariant under the folding
    if not np.array_equal(np.unique(fold[sel]), np.unique(fold[sel][np.isin(fold[sel], fold[~sel], invert=True)])):
        raise AssertionError("trace is not constant on GL2-classes")
    return {"markoff_count": len(point_array(p)), "epi_trace_count": int(epi_count)}
