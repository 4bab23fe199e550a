from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from gsa.perm import DegreeMismatch, Permutation, compose, perm_order
from gsa.permgroup.elements import ElementTable, orbits_of
from gsa.permgroup.schreier import StabChain, schreier_sims

DEFAULT_DEGREE_CAP = 2**18
DEFAULT_CLASS_CAP = 10**6


class NotInGroup(ValueError):
    pass


class PermGroup:
    """A permutation group with a deterministic stabilizer chain.

    Immutable after construction. Element tables, conjugacy classes and
    centralizers are computed on first use and cached.
    """

    def __init__(self, generators, degree: int | None = None, *,
                 degree_cap: int = DEFAULT_DEGREE_CAP, _chain: StabChain | None = None):
        gens = [g.images if isinstance(g, Permutation) else tuple(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generator list")
            degree = len(gens[0])
        if any(len(g) != degree for g in gens):
            raise DegreeMismatch("generators of different degrees")
        if degree > degree_cap:
            raise ValueError(f"degree {degree} exceeds cap {degree_cap}")
        self.degree = degree
        self._gens = gens
        self.chain = _chain if _chain is not None else schreier_sims(gens, degree)
        self.class_cap = DEFAULT_CLASS_CAP

    @property
    def generators(self) -> list[Permutation]:
        return [Permutation._raw(g) for g in self._gens]

    @property
    def order(self) -> int:
        return self.chain.order

    @property
    def base(self) -> list[int]:
        return list(self.chain.base)

    @property
    def strong_generators(self) -> list[Permutation]:
        return [Permutation._raw(g) for g in self.chain.strong_generators()]

    @property
    def transversals(self) -> list[dict[int, Permutation]]:
        return [{p: Permutation._raw(u) for p, (u, _) in t.items()}
                for t in self.chain.transversals]

    def __len__(self) -> int:
        return self.order

    def __contains__(self, p) -> bool:
        img = p.images if isinstance(p, Permutation) else tuple(p)
        return self.chain.contains(img)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def is_abelian(self) -> bool:
        gs = self._gens
        return all(compose(a, b) == compose(b, a) for a in gs for b in gs)

    def subgroup(self, gens) -> "PermGroup":
        return PermGroup(gens, self.degree)

    @cached_property
    def table(self) -> ElementTable:
        return ElementTable(self.chain, self.degree, max_order=self.class_cap)

    @cached_property
    def _class_data(self):
        return _compute_classes(self)

    def __repr__(self) -> str:
        return f"<PermGroup degree={self.degree} order={self.order}>"


def build_group(gens, degree: int | None = None) -> PermGroup:
    """Stabilizer chain for ``<gens>``; an empty list needs ``degree``."""
    if not gens and degree is None:
        raise ValueError("nonempty generator list required")
    return PermGroup(gens, degree)


def membership(G: PermGroup, p: Permutation) -> bool:
    if p.degree != G.degree:
        raise DegreeMismatch(f"degree {p.degree} vs group degree {G.degree}")
    return p in G


def generated_order(gens, degree: int, target: int | None = None) -> int:
    return schreier_sims(gens, degree, target_order=target).order


def is_two_generated_by(G: PermGroup, x: Permutation, y: Permutation) -> bool:
    """True iff ``<x, y> = G``; assumes ``x, y`` lie in ``G``."""
    return generated_order([x.images, y.images], G.degree, G.order) == G.order


@dataclass(frozen=True)
class ConjClass:
    representative: Permutation
    size: int
    element_order: int
    label: str
    index: int = 0          # position in the group's class list
    rep_index: int = 0      # element-table index of the representative


def _letters(k: int) -> str:
    s = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        s = string.ascii_uppercase[r] + s
    return s


class _ClassData:
    __slots__ = ("classes", "class_of", "transporter", "rep_idx")


def _compute_classes(G: PermGroup) -> _ClassData:
    T = G.table
    conj = [T.conj_action(T.index(g)) for g in G._gens] if G._gens else []
    labels = orbits_of(conj, T.size)
    reps = np.unique(labels)

    # transporters: t[x] with rep = t x t^-1
    t = np.full(T.size, -1, dtype=np.int64)
    t[reps] = T.identity
    frontier = reps
    gen_idx = [T.index(g) for g in G._gens]
    while len(frontier):
        nxt = []
        for s, cs in zip(gen_idx, conj):
            y = cs[frontier]
            fresh = t[y] == -1
            if not fresh.any():
                continue
            y, first = np.unique(y[fresh], return_index=True)
            src = frontier[fresh][first]
            t[y] = T.mul(t[src], s)
            nxt.append(y)
        frontier = np.unique(np.concatenate(nxt)) if nxt else np.array([], dtype=np.int64)

    sizes = np.bincount(labels, minlength=T.size)[reps]
    orders = T.element_orders(reps)
    keyed = sorted(zip(orders.tolist(), sizes.tolist(), reps.tolist()))
    classes = []
    count: dict[int, int] = {}
    rank_of_rep = {}
    for k, (o, sz, r) in enumerate(keyed):
        letter = _letters(count.get(o, 0))
        count[o] = count.get(o, 0) + 1
        classes.append(ConjClass(Permutation._raw(T.perm(r)), sz, o, f"{o}{letter}", k, r))
        rank_of_rep[r] = k
    lut = np.zeros(T.size, dtype=np.int64)
    lut[reps] = [rank_of_rep[r] for r in reps.tolist()]
    data = _ClassData()
    data.classes = classes
    data.class_of = lut[labels]
    data.transporter = t
    data.rep_idx = np.array([c.rep_index for c in classes], dtype=np.int64)
    return data


def conjugacy_classes(G: PermGroup) -> list[ConjClass]:
    """Classes sorted by (element order, size, minimal representative).

    Letters are assigned by rank within each element order; they are
    canonical for this package and need not agree with any external atlas.
    """
    return list(G._class_data.classes)


def class_of(G: PermGroup, p: Permutation) -> ConjClass:
    if p not in G:
        raise NotInGroup(str(p))
    i = G.table.index(p.images)
    return G._class_data.classes[int(G._class_data.class_of[i])]


def _subgroup_from_elements(G: PermGroup, idx: np.ndarray) -> PermGroup:
    """Greedy generating set for a subgroup listed by element indices."""
    T = G.table
    gens: list[tuple] = []
    chain = schreier_sims([], G.degree)
    target = len(idx)
    for i in idx.tolist():
        if chain.order == target:
            break
        p = T.perm(i)
        if not chain.contains(p):
            gens.append(p)
            chain = schreier_sims(gens, G.degree)
    return PermGroup(gens, G.degree, _chain=chain)


def centralizer(G: PermGroup, x: Permutation) -> PermGroup:
    if x not in G:
        raise NotInGroup(str(x))
    xi = G.table.index(x.images)
    return _subgroup_from_elements(G, np.flatnonzero(G.table.centralizer_mask(xi)))


def element_order(p: Permutation) -> int:
    return perm_order(p.images)
