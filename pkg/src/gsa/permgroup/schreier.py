"""Deterministic incremental Schreier-Sims.

Transversals keep explicit coset representatives (and their inverses), so
this is meant for moderate degrees. Schreier generators are visited in a
fixed order, which makes the resulting base and strong generating set a
pure function of the input generator list.
"""

from __future__ import annotations

from math import prod

from gsa.perm import compose, invert


class StabChain:
    """Base, strong generators per level and transversals.

    ``transversals[j]`` maps each point ``p`` of the ``j``-th basic orbit to a
    pair ``(u, u_inv)`` with ``u[base[j]] == p``.
    """

    __slots__ = ("degree", "base", "level_gens", "transversals", "_checked")

    def __init__(self, degree: int):
        self.degree = degree
        self.base: list[int] = []
        self.level_gens: list[list[tuple]] = []
        self.transversals: list[dict[int, tuple[tuple, tuple]]] = []
        self._checked: list[set] = []

    @property
    def order(self) -> int:
        return prod(len(t) for t in self.transversals)

    def strong_generators(self) -> list[tuple]:
        seen = set()
        out = []
        for gens in self.level_gens:
            for g in gens:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        """Strip ``g`` through levels ``start..``; return residue and stop level."""
        for j in range(start, len(self.base)):
            rep = self.transversals[j].get(g[self.base[j]])
            if rep is None:
                return g, j
            g = compose(rep[1], g)
        return g, len(self.base)

    def contains(self, g: tuple) -> bool:
        if len(g) != self.degree:
            return False
        h, _ = self.sift(g)
        return _is_identity(h)

    def _extend_orbit(self, j: int) -> None:
        b = self.base[j]
        trans = self.transversals[j]
        if not trans:
            ident = tuple(range(self.degree))
            trans[b] = (ident, ident)
        gens = self.level_gens[j]
        queue = list(trans)
        k = 0
        while k < len(queue):
            p = queue[k]
            k += 1
            u = trans[p][0]
            for s in gens:
                q = s[p]
                if q not in trans:
                    v = compose(s, u)
                    trans[q] = (v, invert(v))
                    queue.append(q)

    def _add_level(self, point: int) -> None:
        self.base.append(point)
        self.level_gens.append([])
        self.transversals.append({})
        self._checked.append(set())

    def _add_strong(self, g: tuple, first: int, last: int) -> None:
        for j in range(first, last + 1):
            self.level_gens[j].append(g)
            self._extend_orbit(j)


def _is_identity(g: tuple) -> bool:
    return all(i == x for i, x in enumerate(g))


def _first_moved(g: tuple) -> int:
    for i, x in enumerate(g):
        if i != x:
            return i
    raise ValueError("identity has no moved point")


def schreier_sims(gens, degree: int, target_order: int | None = None) -> StabChain:
    """Build a stabilizer chain for ``<gens>``.

    If ``target_order`` is given and the product of basic orbit lengths
    reaches it, construction stops early: the orbits found are orbits of
    subgroups of the true point stabilizers, so equality proves the chain is
    already complete. Callers use this for generation tests inside a group
    of known order.
    """
    chain = StabChain(degree)
    gens = [tuple(g) for g in gens]
    gens = [g for g in gens if not _is_identity(g)]
    if not gens:
        return chain
    for g in gens:
        if all(g[b] == b for b in chain.base):
            chain._add_level(_first_moved(g))
    for j in range(len(chain.base)):
        fixed = chain.base[:j]
        chain.level_gens[j] = [g for g in gens if all(g[b] == b for b in fixed)]
        chain._extend_orbit(j)

    if target_order is not None and chain.order >= target_order:
        return chain

    i = len(chain.base) - 1
    while i >= 0:
        restart = None
        trans = chain.transversals[i]
        checked = chain._checked[i]
        gl = chain.level_gens[i]
        for p in list(trans):
            u = trans[p][0]
            for si, s in enumerate(gl):
                key = (p, si)
                if key in checked:
                    continue
                checked.add(key)
                h = compose(trans[s[p]][1], compose(s, u))
                h, lvl = chain.sift(h, i + 1)
                if _is_identity(h):
                    continue
                if lvl == len(chain.base):
                    chain._add_level(_first_moved(h))
                chain._add_strong(h, i + 1, lvl)
                if target_order is not None and chain.order >= target_order:
                    return chain
                restart = lvl
                break
            if restart is not None:
                break
        if restart is None:
            i -= 1
        else:
            i = restart
    return chain
