"""Generating pairs of a finite group up to simultaneous conjugation.

A pair ``(x, y)`` is stored by the element-table indices of its canonical
representative: ``x`` is the minimal element of its conjugacy class and
``y`` is minimal in its orbit under conjugation by ``C_G(x)``. Since table
indices follow the lexicographic order of image arrays, this is the
lexicographically least simultaneous conjugate.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from gsa.perm import Permutation, compose
from gsa.permgroup.elements import orbits_of
from gsa.permgroup.group import ConjClass, PermGroup, _subgroup_from_elements
from gsa.permgroup.schreier import schreier_sims

DEFAULT_PAIR_BUDGET = 5_000_000


class NotGenerating(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class NotAHomomorphism(ValueError):
    pass


class NotSurjective(ValueError):
    pass


@dataclass(frozen=True)
class EpiClass:
    canonical_pair: tuple[Permutation, Permutation]
    hash_key: int
    x_index: int = field(compare=False, default=-1)
    y_index: int = field(compare=False, default=-1)


@dataclass(frozen=True)
class HigmanInvariant:
    commutator_class: ConjClass
    ramification_index: int


def pair_hash(x: np.ndarray, y: np.ndarray) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(np.asarray(x, dtype="<u4").tobytes())
    h.update(np.asarray(y, dtype="<u4").tobytes())
    return int.from_bytes(h.digest(), "little")


class EpiFiber:
    """Per-group machinery for canonical forms and enumeration."""

    def __init__(self, G: PermGroup):
        self.G = G
        self.T = G.table
        self.cd = G._class_data
        self._orbit_min: dict[int, np.ndarray] = {}
        self._cent_gens: dict[int, list[int]] = {}
        self._list = None

    # per-class data -------------------------------------------------------

    def centralizer_gens(self, k: int) -> list[int]:
        if k not in self._cent_gens:
            m = int(self.cd.rep_idx[k])
            C = _subgroup_from_elements(self.G, np.flatnonzero(self.T.centralizer_mask(m)))
            self._cent_gens[k] = [self.T.index(g) for g in C._gens]
        return self._cent_gens[k]

    def orbit_min(self, k: int) -> np.ndarray:
        """Map each element to the least element of its C(rep_k)-conjugation orbit."""
        if k not in self._orbit_min:
            perms = [self.T.conj_action(c) for c in self.centralizer_gens(k)]
            self._orbit_min[k] = orbits_of(perms, self.T.size)
        return self._orbit_min[k]

    # canonical forms ------------------------------------------------------

    def canonical(self, xs, ys) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised canonical representatives of pairs given by indices."""
        T = self.T
        xs = np.atleast_1d(np.asarray(xs, dtype=np.int64))
        ys = np.atleast_1d(np.asarray(ys, dtype=np.int64))
        ks = self.cd.class_of[xs]
        t = self.cd.transporter[xs]
        # rep = t x t^-1, so conjugate y the same way
        ys = T.mul(T.mul(t, ys), T.inv[t])
        out_y = np.empty_like(ys)
        for k in np.unique(ks).tolist():
            sel = ks == k
            out_y[sel] = self.orbit_min(k)[ys[sel]]
        return self.cd.rep_idx[ks], out_y

    def make_class(self, x: int, y: int) -> EpiClass:
        T = self.T
        px, py = T.E[x], T.E[y]
        return EpiClass((Permutation._raw(T.perm(x)), Permutation._raw(T.perm(y))),
                        pair_hash(px, py), int(x), int(y))

    def generates(self, x: int, y: int) -> bool:
        T = self.T
        return schreier_sims([T.perm(x), T.perm(y)], self.G.degree,
                             target_order=T.size).order == T.size

    # enumeration ----------------------------------------------------------

    def enumerate(self, budget: int = DEFAULT_PAIR_BUDGET) -> list[EpiClass]:
        if self._list is not None:
            return self._list
        T = self.T
        abelian = self.G.is_abelian()
        found: dict[tuple[int, int], None] = {}
        tested = 0
        for k, cls in enumerate(self.cd.classes):
            m = cls.rep_index
            cands = np.unique(self.orbit_min(k))
            tested += len(cands)
            if tested > budget:
                raise BudgetExceeded(f"more than {budget} candidate pairs")
            if not abelian and len(cands):
                # commuting pairs generate abelian subgroups
                cands = cands[~T.centralizer_mask(m)[cands]]
            for y in cands.tolist():
                if self.generates(m, y):
                    found[(m, y)] = None
        out = [self.make_class(x, y) for x, y in found]
        out.sort(key=lambda e: e.hash_key)
        self._list = out
        return out


def fiber_of(G: PermGroup) -> EpiFiber:
    fb = getattr(G, "_epi_fiber", None)
    if fb is None:
        fb = EpiFiber(G)
        G._epi_fiber = fb
    return fb


def canonical_form(pair: tuple[Permutation, Permutation], G: PermGroup) -> EpiClass:
    x, y = pair
    fb = fiber_of(G)
    if x not in G or y not in G:
        raise NotGenerating("pair does not lie in G")
    xi, yi = fb.T.index(x.images), fb.T.index(y.images)
    if not fb.generates(xi, yi):
        raise NotGenerating(f"<{x}, {y}> is a proper subgroup")
    cx, cy = fb.canonical([xi], [yi])
    return fb.make_class(int(cx[0]), int(cy[0]))


def enumerate_epi_ext(G: PermGroup, budget: int = DEFAULT_PAIR_BUDGET) -> list[EpiClass]:
    """All generating pairs of ``G`` modulo conjugation, sorted by hash key."""
    return list(fiber_of(G).enumerate(budget))


def commutator_index(fb: EpiFiber, xs, ys) -> np.ndarray:
    """Indices of ``[y, x] = y x y^-1 x^-1``."""
    T = fb.T
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    return T.mul(T.mul(ys, xs), T.mul(T.inv[ys], T.inv[xs]))


def higman_invariant(G: PermGroup, e: EpiClass) -> HigmanInvariant:
    fb = fiber_of(G)
    c = int(commutator_index(fb, [e.x_index], [e.y_index])[0])
    cls = fb.cd.classes[int(fb.cd.class_of[c])]
    return HigmanInvariant(cls, cls.element_order)


class Homomorphism:
    """A map G -> H fixed by the images of G's generators.

    It is a well-defined homomorphism iff the subgroup of G x H generated by
    the pairs (g_i, h_i) projects isomorphically onto G, i.e. has order |G|.
    """

    def __init__(self, G: PermGroup, H: PermGroup, images):
        imgs = [h.images if isinstance(h, Permutation) else tuple(h) for h in images]
        if len(imgs) != len(G._gens):
            raise NotAHomomorphism("need one image per generator of G")
        nG, nH = G.degree, H.degree
        if any(len(h) != nH for h in imgs):
            raise NotAHomomorphism("image degree does not match H")
        if any(not H.chain.contains(h) for h in imgs):
            raise NotAHomomorphism("image outside H")
        graph = [g + tuple(nG + v for v in h) for g, h in zip(G._gens, imgs)]
        self.chain = schreier_sims(graph, nG + nH)
        if self.chain.order != G.order:
            raise NotAHomomorphism("generator images do not define a homomorphism")
        if schreier_sims(imgs, nH, target_order=H.order).order != H.order:
            raise NotSurjective("images generate a proper subgroup of H")
        self.G, self.H = G, H
        self.images = imgs
        self._cache: dict[tuple, tuple] = {}

    def __call__(self, x) -> tuple:
        x = x.images if isinstance(x, Permutation) else tuple(x)
        hit = self._cache.get(x)
        if hit is not None:
            return hit
        nG = self.G.degree
        ch = self.chain
        cur = x
        w = tuple(range(nG + self.H.degree))
        for b, trans in zip(ch.base, ch.transversals):
            rep = trans.get(cur[b])
            if rep is None:
                raise ValueError("element not in G")
            u, uinv = rep
            cur = compose(uinv[:nG], cur)
            w = compose(w, u)
        if any(i != v for i, v in enumerate(cur)):
            raise ValueError("element not in G")
        img = tuple(v - nG for v in w[nG:])
        self._cache[x] = img
        return img


def push_forward(e: EpiClass, q: Homomorphism) -> EpiClass:
    x, y = e.canonical_pair
    return canonical_form((Permutation._raw(q(x)), Permutation._raw(q(y))), q.H)
