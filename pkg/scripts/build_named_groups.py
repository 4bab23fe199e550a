"""Build permutation generators for Sz(8) and PSU3(4) on 65 points.

Sz(8) is the stabiliser in PGL(4, 8) of the Tits ovoid; PSU3(4) is the group
of determinant-one isometries of a hermitian form on F_16^3 acting on the 65
isotropic points. Candidate matrices are found by exhaustive search over small
families (unitriangular, monomial) and kept when they preserve the point set.
The generated group is accepted only if its order is the expected one, so the
output is self-verifying. Writes src/gsa/data/{Sz8,PSU3_4}.txt.
"""

from __future__ import annotations

import itertools
import os
import random
import sys

import numpy as np

from gsa.perm import format_cycles
from gsa.permgroup.schreier import schreier_sims

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "gsa", "data")


def field(q, poly):
    """Multiplication and inverse tables for GF(q), q = 2^k, elements as bit masks."""
    k = q.bit_length() - 1
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            r = 0
            x, y = a, b
            while y:
                if y & 1:
                    r ^= x
                y >>= 1
                x <<= 1
                if x >> k & 1:
                    x ^= poly
            mul[a, b] = r
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
    return mul, inv


def power(mul, a, e):
    r = 1
    for _ in range(e):
        r = mul[r, a]
    return r


class Projective:
    """Points of PG(n-1, q) normalised so the last nonzero coordinate is 1."""

    def __init__(self, q, poly, n):
        self.q, self.n = q, n
        self.mul, self.inv = field(q, poly)

    def normalise(self, v):
        v = list(v)
        for c in reversed(v):
            if c:
                s = self.inv[c]
                return tuple(int(self.mul[s, x]) for x in v)
        raise ValueError("zero vector")

    def apply(self, M, v):
        out = []
        for row in M:
            acc = 0
            for a, b in zip(row, v):
                acc ^= int(self.mul[a, b])
            out.append(acc)
        return tuple(out)

    def perm_of(self, M, points, index):
        img = []
        for p in points:
            w = self.apply(M, p)
            if not any(w):
                return None
            j = index.get(self.normalise(w))
            if j is None:
                return None
            img.append(j)
        if len(set(img)) != len(points):
            return None
        return tuple(img)


def det(P, M):
    # Laplace expansion; characteristic 2 so signs vanish
    n = len(M)
    if n == 1:
        return M[0][0]
    acc = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        acc ^= int(P.mul[M[0][j], det(P, minor)])
    return acc


def search(P, points, families, det_one=False):
    index = {p: i for i, p in enumerate(points)}
    found = []
    for M in families:
        if det_one and det(P, M) != 1:
            continue
        g = P.perm_of(M, points, index)
        if g is not None and g != tuple(range(len(points))):
            found.append(g)
    return found


def unitriangular(q, n, upper):
    slots = [(i, j) for i in range(n) for j in range(n) if (i < j if upper else i > j)]
    for vals in itertools.product(range(q), repeat=len(slots)):
        M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for (i, j), v in zip(slots, vals):
            M[i][j] = v
        yield M


def monomial(q, n):
    for perm in itertools.permutations(range(n)):
        for d in itertools.product(range(1, q), repeat=n):
            M = [[0] * n for _ in range(n)]
            for i, j in enumerate(perm):
                M[i][j] = d[i]
            yield M


def two_generators(gens, degree, order, seed=0):
    """A random pair of group elements that already generates the whole group."""
    rng = random.Random(seed)
    chain = schreier_sims(gens, degree)
    elems = list(gens)

    def rand_elem():
        g = tuple(range(degree))
        for _ in range(40):
            h = rng.choice(elems)
            g = tuple(h[i] for i in g)
        return g

    assert chain.order == order
    for _ in range(1000):
        x, y = rand_elem(), rand_elem()
        if schreier_sims([x, y], degree, target_order=order).order == order:
            return x, y
    raise RuntimeError("no generating pair found")


def dedupe_gens(gens, degree, order):
    out = []
    cur = 1
    for g in gens:
        trial = out + [g]
        o = schreier_sims(trial, degree).order
        if o > cur:
            out, cur = trial, o
        if cur == order:
            break
    return out, cur


def suzuki8():
    P = Projective(8, 0b1011, 4)
    th = lambda x: power(P.mul, x, 4)           # x -> x^4 = x^(2^(m+1)), q = 2^(2m+1)
    m = P.mul
    # coordinates ordered (w, x, y, z) so the translations fixing the point
    # at infinity are lower unitriangular
    pts = [(0, 0, 0, 1)]
    for x in range(8):
        for y in range(8):
            z = int(m[x, y]) ^ int(m[th(x), m[x, x]]) ^ th(y)
            pts.append((1, x, y, z))
    pts = [P.normalise(p) for p in pts]
    assert len(set(pts)) == 65
    gens = search(P, pts, itertools.chain(unitriangular(8, 4, False), unitriangular(8, 4, True)))
    gens += search(P, pts, monomial(8, 4))
    gens, order = dedupe_gens(gens, 65, 29120)
    if order != 29120:
        raise RuntimeError(f"ovoid stabiliser search gave order {order}")
    return gens, frobenius(P, pts)


def psu3_4():
    P = Projective(16, 0b10011, 3)
    m = P.mul
    bar = lambda x: power(m, x, 4)
    pts = []
    for v in itertools.product(range(16), repeat=3):
        if not any(v) or P.normalise(v) != v:
            continue
        a, b, c = v
        # hermitian form with antidiagonal Gram matrix: a c^4 + b b^4 + c a^4
        if int(m[a, bar(c)]) ^ int(m[b, bar(b)]) ^ int(m[c, bar(a)]) == 0:
            pts.append(v)
    assert len(pts) == 65, len(pts)
    gens = search(P, pts, itertools.chain(unitriangular(16, 3, True), unitriangular(16, 3, False)),
                  det_one=True)
    gens += search(P, pts, monomial(16, 3), det_one=True)
    gens, order = dedupe_gens(gens, 65, 62400)
    if order != 62400:
        raise RuntimeError(f"unital stabiliser search gave order {order}")
    return gens, frobenius(P, pts)


def frobenius(P, points):
    """Coordinatewise squaring; both point sets are defined over F_2."""
    index = {p: i for i, p in enumerate(points)}
    return tuple(index[P.normalise(tuple(int(P.mul[c, c]) for c in p))] for p in points)


def write(name, built, order, note):
    gens, frob = built
    x, y = two_generators(gens, 65, order)
    chain = schreier_sims([x, y], 65)
    finv = tuple(np.argsort(frob).tolist())
    for g in (x, y):
        conj = tuple(finv[g[frob[i]]] for i in range(65))
        if not chain.contains(conj):
            raise RuntimeError("Frobenius does not normalise the group")
    path = os.path.join(DATA, f"{name}.txt")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {note}; order {order}, degree 65\n")
        fh.write(format_cycles(x) + "\n" + format_cycles(y) + "\n")
        fh.write("aut:\n" + format_cycles(frob) + "\n")
    print(f"wrote {path}")


def main(argv):
    which = argv[1:] or ["Sz8", "PSU3_4"]
    if "Sz8" in which:
        write("Sz8", suzuki8(), 29120, "Sz(8) on the 65 points of the Tits ovoid in PG(3,8)")
    if "PSU3_4" in which:
        write("PSU3_4", psu3_4(), 62400, "PSU3(4) on the 65 isotropic points of PG(2,16)")


if __name__ == "__main__":
    main(sys.argv)
