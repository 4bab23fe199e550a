"""Exact congruence test at modulus 2l and cheap noncongruence certificates.

The image of a subgroup of SL2(Z) in SL2(Z/n) is measured through its
action on the nonzero column vectors of (Z/n)^2. That action is faithful and
the point stabiliser of e1 in SL2(Z/n) is the unipotent group
{[[1, b], [0, 1]]}, so a stabiliser chain has length two:

    |H| = |e1 . H| * |Stab_H(e1)|,   Stab_H(e1) = <[[1, k], [0, 1]]>

where ``k`` is the gcd of ``n`` and the top-right entries of the Schreier
generators. Both levels are computed with numpy. The generic Schreier-Sims
route on the same permutation action is kept as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from gsa.epi import EpiClass, fiber_of
from gsa.modular import ConsistencyError, Matrix, Signature
from gsa.permgroup.group import PermGroup
from gsa.permgroup.schreier import schreier_sims

DEFAULT_CAP = 512
VECTOR_DEGREE_CAP = DEFAULT_CAP**2 - 1


class CapExceeded(ValueError):
    pass


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def sl2_group_order_mod(n: int) -> int:
    """|SL2(Z/n)| = n^3 prod_{p | n} (1 - p^-2)."""
    if n < 2:
        raise ValueError("modulus must be at least 2")
    out = n**3
    for p in _prime_factors(n):
        out = out // (p * p) * (p * p - 1)
    return out


def _reduce(mats, n: int) -> np.ndarray:
    arr = np.array([[[int(M[0][0]) % n, int(M[0][1]) % n],
                     [int(M[1][0]) % n, int(M[1][1]) % n]] for M in mats], dtype=np.int64)
    for M in arr:
        if (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]) % n != 1 % n:
            raise ValueError("matrix does not have determinant 1 mod n")
    return arr.reshape(-1, 2, 2)


def _matvec(M: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    # M: (2, 2); v: (k, 2) columns stacked as rows
    return (v @ M.T) % n


def _batch_mul(A: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
    return np.einsum("kij,kjl->kil", A, B) % n


def _batch_inv(A: np.ndarray, n: int) -> np.ndarray:
    out = np.empty_like(A)
    out[:, 0, 0] = A[:, 1, 1]
    out[:, 1, 1] = A[:, 0, 0]
    out[:, 0, 1] = -A[:, 0, 1] % n
    out[:, 1, 0] = -A[:, 1, 0] % n
    return out


def image_order_mod(mats, n: int, degree_cap: int = VECTOR_DEGREE_CAP) -> int:
    """Order of the subgroup of SL2(Z/n) generated by the reductions of ``mats``."""
    if n < 2:
        raise ValueError("modulus must be at least 2")
    if n * n - 1 > degree_cap:
        raise CapExceeded(f"vector action degree {n * n - 1} exceeds cap {degree_cap}")
    gens = _reduce(mats, n)
    ident = np.eye(2, dtype=np.int64)
    gens = np.array([g for g in gens if not np.array_equal(g, ident)], dtype=np.int64).reshape(-1, 2, 2)
    if len(gens) == 0:
        return 1
    code = lambda v: v[:, 0] * n + v[:, 1]
    size = n * n
    trans = np.full((size, 2, 2), -1, dtype=np.int64)
    seen = np.zeros(size, dtype=bool)
    e1 = np.array([[1 % n, 0]], dtype=np.int64)
    seen[code(e1)] = True
    trans[code(e1)[0]] = ident
    frontier = e1
    orbit = [e1]
    while len(frontier):
        nxt = []
        for g in gens:
            img = _matvec(g, frontier, n)
            c = code(img)
            fresh = ~seen[c]
            if not fresh.any():
                continue
            c_new, first = np.unique(c[fresh], return_index=True)
            src = frontier[fresh][first]
            seen[c_new] = True
            tsrc = trans[code(src)]
            trans[c_new] = np.einsum("ij,kjl->kil", g, tsrc) % n
            nxt.append(img[fresh][first])
        frontier = np.concatenate(nxt) if nxt else np.empty((0, 2), dtype=np.int64)
        if len(frontier):
            orbit.append(frontier)
    orb = np.concatenate(orbit)
    oc = code(orb)
    t_v = trans[oc]
    # Schreier generators t_{gv}^-1 g t_v all fix e1
    k = n
    for g in gens:
        gv = code(_matvec(g, orb, n))
        s = _batch_mul(_batch_inv(trans[gv], n),
                       np.einsum("ij,kjl->kil", g, t_v) % n, n)
        if not (np.all(s[:, 0, 0] == 1 % n) and np.all(s[:, 1, 0] == 0)):
            raise AssertionError("Schreier generator does not fix e1")
        k = math.gcd(k, *np.unique(s[:, 0, 1]).tolist())
        if k == 1:
            break
    return len(orb) * (n // k)


def subgroup_index_mod(mats, n: int, degree_cap: int = VECTOR_DEGREE_CAP) -> int:
    """[SL2(Z/n) : image of <mats>]."""
    full = sl2_group_order_mod(n)
    order = image_order_mod(mats, n, degree_cap)
    if full % order:
        raise ConsistencyError("image order does not divide |SL2(Z/n)|")
    return full // order


def vector_action(M: Matrix, n: int) -> tuple:
    """Permutation of the n^2 - 1 nonzero vectors; vector (a, b) is a*n + b - 1."""
    (a, b), (c, d) = M
    out = []
    for i in range(1, n * n):
        x, y = divmod(i, n)
        out.append(((a * x + b * y) % n) * n + (c * x + d * y) % n - 1)
    return tuple(out)


def subgroup_index_mod_generic(mats, n: int) -> int:
    """Same as :func:`subgroup_index_mod`, via Schreier-Sims on the vector action."""
    perms = [vector_action(M, n) for M in mats]
    order = schreier_sims(perms, n * n - 1).order
    return sl2_group_order_mod(n) // order


@dataclass
class CongruenceReport:
    level_l: int
    modulus: int
    index_d: int
    congruence_degree_e: int | None
    congruence_deficiency_f: int | None
    verdict: str                      # congruence | noncongruence | skipped_cap
    totally_noncongruence: bool
    certificates: list[str] = field(default_factory=list)


def congruence_verdict(sig: Signature, mats, cap: int = DEFAULT_CAP,
                       certificates: list[str] | None = None) -> CongruenceReport:
    l = sig.level
    n = 2 * l
    certs = list(certificates or [])
    d = sig.d
    if n > cap:
        return CongruenceReport(l, n, d, None, None, "skipped_cap", False, certs)
    e = subgroup_index_mod(mats, n, degree_cap=max(cap * cap - 1, 3))
    if d % e:
        raise ConsistencyError(f"congruence degree {e} does not divide d = {d}")
    f = d // e
    verdict = "congruence" if f == 1 else "noncongruence"
    if verdict == "congruence" and certs:
        raise ConsistencyError("a noncongruence certificate fired on a congruence component")
    return CongruenceReport(l, n, d, e, f, verdict, e == 1 and d > 1, certs)


CRITERION_A = "totally noncongruence (criterion A)"
MONODROMIC = "noncongruence (monodromic)"


def criterion_A(G: PermGroup, e: EpiClass) -> str | None:
    """Certificate when |x|, |y|, |(xy)^-1| are pairwise coprime."""
    if G.order == 1:
        return None
    fb = fiber_of(G)
    T = fb.T
    x, y = e.x_index, e.y_index
    z = int(T.inv[T.mul(np.array([x]), np.array([y]))][0])
    a, b, c = (int(o) for o in T.element_orders(np.array([x, y, z])))
    if math.gcd(a, b) == math.gcd(a, c) == math.gcd(b, c) == 1:
        return CRITERION_A
    return None


def criterion_A_any(G: PermGroup, points: list[EpiClass]) -> str | None:
    """Vectorised criterion A over a component's points."""
    if G.order == 1 or not points:
        return None
    fb = fiber_of(G)
    T = fb.T
    xs = np.array([p.x_index for p in points], dtype=np.int64)
    ys = np.array([p.y_index for p in points], dtype=np.int64)
    zs = T.inv[T.mul(xs, ys)]
    a, b, c = (T.element_orders(v) for v in (xs, ys, zs))
    ok = (np.gcd(a, b) == 1) & (np.gcd(a, c) == 1) & (np.gcd(b, c) == 1)
    return CRITERION_A if ok.any() else None


def monodromic_certificate(mi, l: int | None = None) -> str | None:
    """Alt(m) or Sym(m) with m >= 9 has a composition factor that no
    congruence monodromy group can have."""
    if mi is None:
        return None
    if mi.classification in ("Alt", "Sym") and mi.domain_size >= 9:
        return MONODROMIC
    return None


def coset_action_mod(subgroup_gens, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Right action of the moves on cosets H g of H = <subgroup_gens> mod n.

    Returns ``(su, sv)`` in the move convention of :mod:`gsa.modular`; the
    stabiliser of coset 0 is the full preimage of H in SL2(Z).
    """
    from gsa.modular import MOVE_MATRIX

    def key(M):
        return tuple(int(v) % n for row in M for v in row)

    def mul(A, B):
        return ((A[0] * B[0] + A[1] * B[2]) % n, (A[0] * B[1] + A[1] * B[3]) % n,
                (A[2] * B[0] + A[3] * B[2]) % n, (A[2] * B[1] + A[3] * B[3]) % n)

    ident = key(((1, 0), (0, 1)))
    hg = [key(M) for M in subgroup_gens]
    H = {ident}
    todo = [ident]
    while todo:
        a = todo.pop()
        for g in hg:
            b = mul(a, g)
            if b not in H:
                H.add(b)
                todo.append(b)
    H = sorted(H)
    mu, mv = key(MOVE_MATRIX["U"]), key(MOVE_MATRIX["V"])
    coset_of: dict[tuple, int] = {}
    reps: list[tuple] = []

    def add(g):
        idx = len(reps)
        reps.append(g)
        for h in H:
            coset_of[mul(h, g)] = idx
        return idx

    add(ident)
    su_l, sv_l = [], []
    k = 0
    while k < len(reps):
        g = reps[k]
        out = []
        for m in (mu, mv):
            img = mul(g, m)
            j = coset_of.get(img)
            if j is None:
                j = add(img)
            out.append(j)
        su_l.append(out[0])
        sv_l.append(out[1])
        k += 1
    return np.array(su_l, dtype=np.int64), np.array(sv_l, dtype=np.int64)
