"""Finite permutation actions of SL2(Z) given by the images of two moves.

An action is a pair of permutation arrays ``(su, sv)`` on ``d`` points: the
images of the moves U and V whose abelianised matrices are

    U -> T      = [[1, 1], [0, 1]]
    V -> S^-1   = [[0, -1], [1, 0]]

Words are read in application order and a word ``m1 m2 ... mk`` has matrix
``M(m1) M(m2) ... M(mk)``. With this convention the point stabiliser is a
subgroup of SL2(Z) of index ``d``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import reduce

import numpy as np

MOVE_ORDER = ("U", "V", "U_inv", "V_inv")

Matrix = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Matrix = ((1, 0), (0, 1))
MINUS_I: Matrix = ((-1, 0), (0, -1))
T: Matrix = ((1, 1), (0, 1))
S: Matrix = ((0, 1), (-1, 0))
MOVE_MATRIX: dict[str, Matrix] = {
    "U": T,
    "V": ((0, -1), (1, 0)),
    "U_inv": ((1, -1), (0, 1)),
    "V_inv": S,
}


class ConsistencyError(RuntimeError):
    """Raised when an action violates an identity forced by SL2(Z)."""


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    return ((A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
            (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]))


def mat_inv(A: Matrix) -> Matrix:
    (a, b), (c, d) = A
    det = a * d - b * c
    if det != 1:
        raise ValueError(f"determinant {det} != 1")
    return ((d, -b), (-c, a))


def mat_transpose(A: Matrix) -> Matrix:
    return ((A[0][0], A[1][0]), (A[0][1], A[1][1]))


def word_matrix(word) -> Matrix:
    return reduce(mat_mul, (MOVE_MATRIX[m] for m in word), IDENTITY)


def matrix_to_word(M: Matrix) -> list[str]:
    """A move word whose matrix is ``M``.

    Keeps ``M = P R`` with ``P`` the recorded prefix and reduces the lower
    left entry of ``R`` Euclid-style until ``R = +-T^b``.
    """
    (a, b), (c, d) = M
    if a * d - b * c != 1:
        raise ValueError("not in SL2(Z)")
    word: list[str] = []
    R = M
    while R[1][0] != 0:
        k = R[0][0] // R[1][0]
        R = mat_mul(((1, -k), (0, 1)), R)
        word += ["U"] * k if k >= 0 else ["U_inv"] * (-k)
        R = mat_mul(MOVE_MATRIX["V_inv"], R)
        word.append("V")
    if R[0][0] == -1:
        R = mat_mul(MINUS_I, R)
        word += ["V", "V"]
    k = R[0][1]
    word += ["U"] * k if k >= 0 else ["U_inv"] * (-k)
    if word_matrix(word) != M:
        raise AssertionError("word reconstruction failed")
    return word


def perm_power_word(su: np.ndarray, sv: np.ndarray, word, pts: np.ndarray) -> np.ndarray:
    """Apply a move word to an array of points."""
    inv_u = inv_v = None
    out = np.asarray(pts)
    for m in word:
        if m == "U":
            out = su[out]
        elif m == "V":
            out = sv[out]
        elif m == "U_inv":
            inv_u = np.argsort(su) if inv_u is None else inv_u
            out = inv_u[out]
        elif m == "V_inv":
            inv_v = np.argsort(sv) if inv_v is None else inv_v
            out = inv_v[out]
        else:
            raise ValueError(f"unknown move {m!r}")
    return out


@dataclass(frozen=True)
class Signature:
    d: int
    minus_i: bool
    d_bar: int
    c2: int
    c3: int
    cusp_widths: tuple[int, ...]
    genus: int
    level: int

    def widths_str(self) -> str:
        c = Counter(self.cusp_widths)
        return " ".join(f"{w}^{c[w]}" for w in sorted(c))

    def as_tuple(self) -> tuple:
        return (self.d, self.c2, self.c3, self.minus_i, self.cusp_widths, self.genus)


@dataclass
class PlusMinusSpace:
    """The quotient of the points by the action of -I."""

    labels: np.ndarray        # point -> index on the quotient
    size: int
    sigma_t: np.ndarray
    sigma_s: np.ndarray
    sigma_j: np.ndarray       # image of T^-1 S


def _cycle_lengths(p: np.ndarray) -> list[int]:
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    out = []
    for i in range(n):
        if seen[i]:
            continue
        k = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            k += 1
        out.append(k)
    return out


def _is_identity(p: np.ndarray) -> bool:
    return bool(np.array_equal(p, np.arange(len(p))))


def check_relations(su: np.ndarray, sv: np.ndarray) -> np.ndarray:
    """Verify V^2 is central and (U^-1 V^-1)^3 = V^2; return V^2."""
    su = np.asarray(su)
    sv = np.asarray(sv)
    pi = sv[sv]
    if not np.array_equal(pi[su], su[pi]) or not np.array_equal(pi[sv], sv[pi]):
        raise ConsistencyError("V^2 is not central in the action")
    if not _is_identity(pi[pi]):
        raise ConsistencyError("V^4 acts nontrivially")
    pts = np.arange(len(su))
    j3 = perm_power_word(su, sv, ["U_inv", "V_inv"] * 3, pts)
    if not np.array_equal(j3, pi):
        raise ConsistencyError("(T^-1 S)^3 != -I in the action")
    return pi


def plus_minus_space(su: np.ndarray, sv: np.ndarray) -> PlusMinusSpace:
    su = np.asarray(su)
    sv = np.asarray(sv)
    pi = check_relations(su, sv)
    d = len(su)
    rep = np.minimum(np.arange(d), pi)
    uniq, labels = np.unique(rep, return_inverse=True)
    size = len(uniq)
    inv_u = np.argsort(su)
    inv_v = np.argsort(sv)
    sigma_t = labels[su[uniq]]
    sigma_s = labels[inv_v[uniq]]
    sigma_j = labels[inv_v[inv_u[uniq]]]   # apply T^-1, then S
    return PlusMinusSpace(labels, size, sigma_t, sigma_s, sigma_j)


def signature_from_action(su, sv) -> Signature:
    su = np.asarray(su)
    sv = np.asarray(sv)
    d = len(su)
    pm = plus_minus_space(su, sv)
    minus_i = _is_identity(sv[sv])
    d_bar = pm.size
    if not _is_identity(pm.sigma_s[pm.sigma_s]):
        raise ConsistencyError("S does not act as an involution on the +-space")
    if not _is_identity(pm.sigma_j[pm.sigma_j[pm.sigma_j]]):
        raise ConsistencyError("T^-1 S does not have order dividing 3 on the +-space")
    c2 = int(np.sum(pm.sigma_s == np.arange(d_bar)))
    c3 = int(np.sum(pm.sigma_j == np.arange(d_bar)))
    widths = tuple(sorted(_cycle_lengths(pm.sigma_t)))
    cusps = len(widths)
    twelve_g = 12 + d_bar - 3 * c2 - 4 * c3 - 6 * cusps
    if twelve_g % 12 or twelve_g < 0:
        raise ConsistencyError(f"non-integral genus: 12g = {twelve_g}")
    if sum(widths) != d_bar or (d_bar - c2) % 2 or (d_bar - c3) % 3:
        raise ConsistencyError("signature congruences violated")
    if not minus_i and d % 2:
        raise ConsistencyError("-I acts freely but d is odd")
    level = reduce(math.lcm, widths, 1)
    return Signature(d, minus_i, d_bar, c2, c3, widths, twelve_g // 12, level)


@dataclass
class SchreierTree:
    parent: np.ndarray        # -1 at the base point
    move: list[str | None]
    order: list[int]          # breadth-first visiting order

    def word(self, i: int) -> list[str]:
        w = []
        while self.parent[i] >= 0:
            w.append(self.move[i])
            i = int(self.parent[i])
        return w[::-1]


def schreier_tree(su, sv, base: int = 0) -> SchreierTree:
    su = np.asarray(su)
    sv = np.asarray(sv)
    d = len(su)
    images = {"U": su, "V": sv, "U_inv": np.argsort(su), "V_inv": np.argsort(sv)}
    parent = np.full(d, -2, dtype=np.int64)
    move: list[str | None] = [None] * d
    parent[base] = -1
    order = [base]
    k = 0
    while k < len(order):
        p = order[k]
        k += 1
        for m in MOVE_ORDER:
            q = int(images[m][p])
            if parent[q] == -2:
                parent[q] = p
                move[q] = m
                order.append(q)
    if len(order) != d:
        raise ConsistencyError("action is not transitive")
    return SchreierTree(parent, move, order)


def stabilizer_matrices_from_action(su, sv, base: int = 0, *,
                                    transpose: bool = False) -> list[Matrix]:
    """Schreier generators of the stabiliser of ``base``.

    For each point ``p`` and move ``m`` in {U, V} with ``q = p.m`` the
    generator is ``M(w_p) M(m) M(w_q)^-1``. ``transpose=True`` uses the
    mirror convention (products read right to left), which yields the
    transposed generators.
    """
    su = np.asarray(su)
    sv = np.asarray(sv)
    tree = schreier_tree(su, sv, base)
    mats: dict[int, Matrix] = {}
    for p in tree.order:
        par = int(tree.parent[p])
        if par < 0:
            mats[p] = IDENTITY
        else:
            mats[p] = mat_mul(mats[par], MOVE_MATRIX[tree.move[p]])
    out: list[Matrix] = []
    seen = set()
    for p in tree.order:
        for m, img in (("U", su), ("V", sv)):
            q = int(img[p])
            g = mat_mul(mat_mul(mats[p], MOVE_MATRIX[m]), mat_inv(mats[q]))
            if g == IDENTITY or g in seen:
                continue
            seen.add(g)
            out.append(g)
    if not out:
        out = [MOVE_MATRIX["U"], MOVE_MATRIX["V"]] if len(su) == 1 else []
    if transpose:
        out = [mat_transpose(g) for g in out]
    return out
