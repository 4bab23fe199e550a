"""Nielsen moves on generating pairs and the resulting SL2(Z)-components.

The two moves are

    U : (x, y) -> (x, x y)
    V : (x, y) -> (y, x^-1)

acting on canonical pair classes. Their abelianisations are T and S^-1
(see :mod:`gsa.modular`). All move permutations are computed once for the
whole fiber with vectorised table lookups.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from gsa.epi import EpiClass, EpiFiber, commutator_index, fiber_of
from gsa.modular import (
    MOVE_MATRIX,
    MOVE_ORDER,
    ConsistencyError,
    Matrix,
    SchreierTree,
    Signature,
    plus_minus_space,
    schreier_tree,
    signature_from_action,
    stabilizer_matrices_from_action,
    word_matrix,
)
from gsa.perm import compose
from gsa.permgroup.altsym import identify_alt_sym as _identify
from gsa.permgroup.elements import orbits_of
from gsa.permgroup.group import ConjClass, PermGroup


class NielsenMove(str, Enum):
    U = "U"
    V = "V"
    U_inv = "U_inv"
    V_inv = "V_inv"

    @property
    def matrix(self) -> Matrix:
        return MOVE_MATRIX[self.value]

    @property
    def inverse(self) -> "NielsenMove":
        return {"U": NielsenMove.U_inv, "V": NielsenMove.V_inv,
                "U_inv": NielsenMove.U, "V_inv": NielsenMove.V}[self.value]


def _check_move_matrices() -> None:
    T = ((1, 1), (0, 1))
    S_inv = ((0, -1), (1, 0))
    assert word_matrix(["U"]) == T and word_matrix(["V"]) == S_inv
    assert word_matrix(["U", "U_inv"]) == word_matrix(["V", "V_inv"]) == ((1, 0), (0, 1))
    assert word_matrix(["V", "V"]) == ((-1, 0), (0, -1))
    # T^-1 S has order 3 modulo -I
    assert word_matrix(["U_inv", "V_inv"] * 3) == ((-1, 0), (0, -1))


_check_move_matrices()


def move_pairs(fb: EpiFiber, move: str, xs, ys) -> tuple[np.ndarray, np.ndarray]:
    """Raw (uncanonicalised) images of index pairs under a move."""
    T = fb.T
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    if move == "U":
        return xs, T.mul(xs, ys)
    if move == "U_inv":
        return xs, T.mul(T.inv[xs], ys)
    if move == "V":
        return ys, T.inv[xs]
    if move == "V_inv":
        return T.inv[ys], xs
    raise ValueError(f"unknown move {move!r}")


def apply_move(e: EpiClass, m, G: PermGroup) -> EpiClass:
    fb = fiber_of(G)
    xs, ys = move_pairs(fb, NielsenMove(m).value, [e.x_index], [e.y_index])
    cx, cy = fb.canonical(xs, ys)
    return fb.make_class(int(cx[0]), int(cy[0]))


class FiberIndex:
    """Position lookup for a sorted list of EpiClasses of one group."""

    def __init__(self, fb: EpiFiber, classes: list[EpiClass]):
        self.fb = fb
        self.classes = classes
        self.xs = np.array([e.x_index for e in classes], dtype=np.int64)
        self.ys = np.array([e.y_index for e in classes], dtype=np.int64)
        keys = self.xs * fb.T.size + self.ys
        self._order = np.argsort(keys)
        self._keys = keys[self._order]

    def __len__(self) -> int:
        return len(self.classes)

    def positions(self, xs, ys) -> np.ndarray:
        """Positions of canonical pairs; raises if any is missing."""
        keys = np.asarray(xs, dtype=np.int64) * self.fb.T.size + np.asarray(ys, dtype=np.int64)
        i = np.searchsorted(self._keys, keys)
        i = np.minimum(i, len(self._keys) - 1)
        if not np.array_equal(self._keys[i], keys):
            raise ConsistencyError("move image outside the enumerated fiber")
        return self._order[i]

    def move_perm(self, move: str) -> np.ndarray:
        xs, ys = move_pairs(self.fb, move, self.xs, self.ys)
        cx, cy = self.fb.canonical(xs, ys)
        return self.positions(cx, cy)

    def aut_perm(self, aut: tuple) -> np.ndarray:
        """Permutation of the fiber induced by conjugation with ``aut``."""
        c = self.fb.T.conj_action_external(aut)
        cx, cy = self.fb.canonical(c[self.xs], c[self.ys])
        return self.positions(cx, cy)


@dataclass
class OrbitComponent:
    points: list[EpiClass]
    sigma_u: np.ndarray            # local images under U
    sigma_v: np.ndarray            # local images under V
    fiber_positions: np.ndarray    # positions in the full fiber list
    tree: SchreierTree
    base_point: int = 0
    commutator_class: ConjClass | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def d(self) -> int:
        return len(self.points)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.sigma_u.tolist(), self.sigma_v.tolist()))

    @property
    def min_hash(self) -> int:
        return self.points[0].hash_key

    def word(self, i: int) -> list[str]:
        return self.tree.word(i)


def _local(global_perm: np.ndarray, members: np.ndarray, lookup: np.ndarray) -> np.ndarray:
    return lookup[global_perm[members]]


def decompose_components(classes: list[EpiClass], G: PermGroup) -> list[OrbitComponent]:
    """Split the fiber into move-orbits, sorted by (size, least hash)."""
    fb = fiber_of(G)
    classes = sorted(classes, key=lambda e: e.hash_key)
    if not classes:
        return []
    idx = FiberIndex(fb, classes)
    su = idx.move_perm("U")
    sv = idx.move_perm("V")
    n = len(classes)
    if len(np.unique(su)) != n or len(np.unique(sv)) != n:
        raise ConsistencyError("moves are not bijective on the fiber")
    # V^2 must agree with the inversion (x, y) -> (x^-1, y^-1)
    T = fb.T
    ix, iy = fb.canonical(T.inv[idx.xs], T.inv[idx.ys])
    if not np.array_equal(sv[sv], idx.positions(ix, iy)):
        raise ConsistencyError("V^2 differs from simultaneous inversion")
    comm = fb.cd.class_of[commutator_index(fb, idx.xs, idx.ys)]

    labels = orbits_of([su, sv], n)
    lookup = np.empty(n, dtype=np.int64)
    comps = []
    for lab in np.unique(labels).tolist():
        members = np.flatnonzero(labels == lab)   # ascending = sorted by hash
        lookup[members] = np.arange(len(members))
        lsu = _local(su, members, lookup)
        lsv = _local(sv, members, lookup)
        ks = np.unique(comm[members])
        if len(ks) != 1:
            raise ConsistencyError("Higman invariant is not constant on a component")
        comps.append(OrbitComponent(
            points=[classes[i] for i in members.tolist()],
            sigma_u=lsu, sigma_v=lsv, fiber_positions=members,
            tree=schreier_tree(lsu, lsv, 0),
            commutator_class=fb.cd.classes[int(ks[0])],
        ))
    comps.sort(key=lambda c: (c.d, c.min_hash))
    return comps


def signature(c: OrbitComponent, G: PermGroup | None = None) -> Signature:
    sig = c._cache.get("signature")
    if sig is None:
        sig = signature_from_action(c.sigma_u, c.sigma_v)
        c._cache["signature"] = sig
    return sig


def stabilizer_matrices(c: OrbitComponent) -> list[Matrix]:
    return stabilizer_matrices_from_action(c.sigma_u, c.sigma_v, c.base_point)


@dataclass(frozen=True)
class MonodromyInfo:
    domain_size: int
    classification: str
    order_digits: int | None

    @property
    def order_known(self) -> bool:
        return self.order_digits is not None


def _decimal_digits(n: int) -> int:
    """Exact digit count; str() refuses ints past a few thousand digits."""
    n = abs(n)
    k = max(1, int(n.bit_length() * 0.30102999566398120))
    while 10 ** (k - 1) > n and k > 1:
        k -= 1
    while 10 ** k <= n:
        k += 1
    return k


def _monodromy(su: np.ndarray, sv: np.ndarray) -> MonodromyInfo:
    pm = plus_minus_space(su, sv)
    gens = [tuple(pm.sigma_t.tolist()), tuple(pm.sigma_s.tolist())]
    res = _identify(gens, pm.size)
    if not res.transitive:
        raise ConsistencyError("monodromy is not transitive")
    digits = _decimal_digits(res.order) if res.order is not None else None
    return MonodromyInfo(pm.size, res.kind, digits)


def monodromy_summary(c: OrbitComponent) -> MonodromyInfo:
    info = c._cache.get("monodromy")
    if info is None:
        info = _monodromy(c.sigma_u, c.sigma_v)
        c._cache["monodromy"] = info
    return info


@dataclass
class AbsComponent:
    members: list[int]             # indices into the component list
    abs_degree: int
    monodromy: MonodromyInfo | None
    heuristic: bool = False
    sigma_u: np.ndarray | None = None
    sigma_v: np.ndarray | None = None

    @property
    def m(self) -> int:
        return len(self.members)


class NotNormalizing(ValueError):
    pass


def _check_normalizes(G: PermGroup, auts) -> None:
    for a in auts:
        if len(a) != G.degree:
            raise NotNormalizing("automorphism has the wrong degree")
        ainv = tuple(np.argsort(np.asarray(a)).tolist())
        for g in G._gens:
            if compose(ainv, compose(g, a)) not in G:
                raise NotNormalizing(f"{a} does not normalise the group")


def abs_components(comps: list[OrbitComponent], aut_gens=None,
                   G: PermGroup | None = None) -> list[AbsComponent]:
    """Group components into Out-orbits and fold each orbit by the auts.

    The abs degree of a group of components is the number of orbits of
    ``<auts>`` on their union; the folded monodromy is generated by the
    moves acting on those orbits. Without automorphisms, components with
    equal signature and Higman order are grouped and flagged heuristic.
    """
    if not comps:
        return []
    if aut_gens is None:
        groups: dict[tuple, list[int]] = defaultdict(list)
        for i, c in enumerate(comps):
            key = (signature(c).as_tuple(), c.commutator_class.element_order)
            groups[key].append(i)
        out = [AbsComponent(v, comps[v[0]].d, None, heuristic=True) for v in groups.values()]
        out.sort(key=lambda a: min(a.members))
        return out

    if G is None:
        raise ValueError("the group is needed to apply automorphisms")
    auts = [tuple(a.images) if hasattr(a, "images") else tuple(a) for a in aut_gens]
    _check_normalizes(G, auts)
    fb = fiber_of(G)
    classes = sorted((e for c in comps for e in c.points), key=lambda e: e.hash_key)
    idx = FiberIndex(fb, classes)
    n = len(classes)
    comp_of = np.empty(n, dtype=np.int64)
    pos_of = {}
    for ci, c in enumerate(comps):
        pos = idx.positions([e.x_index for e in c.points], [e.y_index for e in c.points])
        comp_of[pos] = ci
        pos_of[ci] = pos
    aut_perms = [idx.aut_perm(a) for a in auts]
    fold = orbits_of(aut_perms, n)            # abs point label of each fiber point

    # components related by an aut share a label in this graph
    nc = len(comps)
    comp_links = [np.arange(nc)]
    for p in aut_perms:
        img = np.empty(nc, dtype=np.int64)
        for ci in range(nc):
            img[ci] = comp_of[p[pos_of[ci][0]]]
        comp_links.append(img)
    clump = orbits_of(comp_links[1:], nc) if aut_perms else np.arange(nc)

    su = idx.move_perm("U")
    sv = idx.move_perm("V")
    out = []
    for lab in np.unique(clump).tolist():
        members = np.flatnonzero(clump == lab).tolist()
        pts = np.concatenate([pos_of[ci] for ci in members])
        abs_labels = np.unique(fold[pts])
        look = {int(v): k for k, v in enumerate(abs_labels.tolist())}
        reps = np.array([pts[np.flatnonzero(fold[pts] == v)[0]] for v in abs_labels])
        fu = np.array([look[int(fold[su[r]])] for r in reps], dtype=np.int64)
        fv = np.array([look[int(fold[sv[r]])] for r in reps], dtype=np.int64)
        mono = _monodromy(fu, fv)
        out.append(AbsComponent(members, len(abs_labels), mono, False, fu, fv))
    return out


def component_pushforward(q, comps_G: list[OrbitComponent],
                          comps_H: list[OrbitComponent]) -> list[int]:
    """Index of the H-component containing the image of each G-component.

    The image of every point of a G-component must land in one H-component,
    since pushing forward commutes with the moves; this is checked.
    """
    from gsa.epi import push_forward

    where = {}
    for j, c in enumerate(comps_H):
        for e in c.points:
            where[e] = j
    out = []
    for c in comps_G:
        targets = {where[push_forward(e, q)] for e in c.points}
        if len(targets) != 1:
            raise ConsistencyError("a component maps into several components")
        out.append(targets.pop())
    return out
