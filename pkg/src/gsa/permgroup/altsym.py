"""Recognising Alt(m) and Sym(m) in their natural action."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from gsa.perm import compose, cycle_lengths
from gsa.permgroup.schreier import schreier_sims

# Exact orders by Schreier-Sims are only attempted up to this degree when
# no Jordan element is found (or the group is imprimitive).
ORDER_DEGREE_CAP = 48
JORDAN_SEARCH = 400


@dataclass(frozen=True)
class AltSymResult:
    kind: str               # "Alt", "Sym" or "Other"
    degree: int
    order: int | None       # None when not computed (too large)
    transitive: bool
    primitive: bool


def orbit(gens, start: int) -> list[int]:
    seen = {start}
    out = [start]
    k = 0
    while k < len(out):
        p = out[k]
        k += 1
        for g in gens:
            q = g[p]
            if q not in seen:
                seen.add(q)
                out.append(q)
    return out


def is_transitive(gens, m: int) -> bool:
    if m <= 1:
        return True
    return len(orbit(gens, 0)) == m


def _minimal_block(gens, m: int, a: int, b: int) -> list[int]:
    """Smallest block containing ``a`` and ``b`` (union-find closure)."""
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = deque([(a, b)])
    parent[find(b)] = find(a)
    while queue:
        x, y = queue.popleft()
        for g in gens:
            u, v = find(g[x]), find(g[y])
            if u != v:
                parent[v] = u
                queue.append((g[x], g[y]))
    r = find(a)
    return [i for i in range(m) if find(i) == r]


def is_primitive(gens, m: int) -> bool:
    """Transitive group test: no block through 0 other than {0} and everything."""
    if m <= 2:
        return True
    for b in range(1, m):
        if len(_minimal_block(gens, m, 0, b)) < m:
            return False
    return True


def _jordan_prime(g: tuple, m: int) -> int | None:
    """A prime p <= m-3 such that some power of ``g`` is a p-cycle."""
    lens = cycle_lengths(g)
    for c in set(lens):
        if c < 2 or c > m - 3 or not _is_prime(c):
            continue
        if lens.count(c) == 1 and all(l % c for l in lens if l != c):
            return c
    return None


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def _has_jordan_element(gens, m: int) -> bool:
    seen = set()
    queue = deque(gens)
    while queue and len(seen) < JORDAN_SEARCH:
        g = queue.popleft()
        if g in seen:
            continue
        seen.add(g)
        if _jordan_prime(g, m):
            return True
        for s in gens:
            queue.append(compose(g, s))
    return False


def _is_even(g: tuple) -> bool:
    return sum(c - 1 for c in cycle_lengths(g)) % 2 == 0


def identify_alt_sym(gens, m: int, order_cap: int = ORDER_DEGREE_CAP) -> AltSymResult:
    """Decide whether ``<gens>`` on ``m`` points is Alt(m), Sym(m) or neither.

    A primitive group containing a prime cycle of length at most ``m - 3``
    contains Alt(m) (Jordan), so its order is ``m!/2`` or ``m!`` according to
    the parity of the generators. Otherwise the order comes from
    Schreier-Sims when ``m <= order_cap``. The final verdict compares that
    order with ``m!/2`` and ``m!``.
    """
    gens = [tuple(g) for g in gens]
    if m <= 1:
        return AltSymResult("Other", m, 1, True, True)
    trans = is_transitive(gens, m)
    prim = trans and is_primitive(gens, m)
    all_even = all(_is_even(g) for g in gens)
    order = None
    if prim and _has_jordan_element(gens, m):
        order = math.factorial(m) // (2 if all_even else 1)
    elif m <= order_cap:
        order = schreier_sims(gens, m).order
    kind = "Other"
    if order is not None and trans:
        if order == math.factorial(m):
            kind = "Sym"
        elif 2 * order == math.factorial(m) and all_even:
            kind = "Alt"
    return AltSymResult(kind, m, order, trans, prim)
