"""Full element tables for small permutation groups.

Every element of ``G`` gets an integer index; indices follow the
lexicographic order of image arrays, so "minimal element" and "minimal
index" coincide. Products, inverses and conjugation are done in batches with
numpy and mapped back to indices through an integer key built from the
images of the base points (a base determines an element uniquely).
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


class GroupTooLarge(RuntimeError):
    pass


class ElementTable:
    def __init__(self, chain, degree: int, max_order: int = 10**6):
        order = chain.order
        if order > max_order:
            raise GroupTooLarge(f"|G| = {order} exceeds element-table cap {max_order}")
        self.degree = degree
        dtype = np.int16 if degree < 2**15 else np.int32
        cur = np.arange(degree, dtype=dtype)[None, :]
        # every element is u_0 u_1 ... u_k with u_j from the j-th transversal
        for trans in reversed(chain.transversals):
            reps = np.array([trans[p][0] for p in sorted(trans)], dtype=dtype)
            cur = reps[:, cur].reshape(-1, degree)
        if degree:
            cur = cur[np.lexsort(cur.T[::-1])]
        self.E = np.ascontiguousarray(cur)
        self.size = len(self.E)
        self.base = list(chain.base)

        radix = max(degree, 1)
        if radix ** max(len(self.base), 1) < 2**62:
            w = np.array([radix**j for j in range(len(self.base))], dtype=np.int64)
            self._weights = w
            keys = self._keys(self.E)
            self._key_order = np.argsort(keys, kind="stable")
            self._sorted_keys = keys[self._key_order]
            self._lookup = None
        else:
            self._weights = None
            self._lookup = {row.tobytes(): i for i, row in enumerate(self.E)}

        self.identity = 0  # identity is the lexicographically least element
        self.inv = self.index_of(np.argsort(self.E, axis=1).astype(self.E.dtype))

    def _keys(self, rows: np.ndarray) -> np.ndarray:
        if not self.base:
            return np.zeros(len(rows), dtype=np.int64)
        return rows[:, self.base].astype(np.int64) @ self._weights

    def index_of(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows).reshape(-1, self.degree)
        if self._lookup is not None:
            return np.array([self._lookup[r.astype(self.E.dtype).tobytes()] for r in rows],
                            dtype=np.int64)
        k = self._keys(rows)
        pos = np.searchsorted(self._sorted_keys, k)
        pos = np.minimum(pos, self.size - 1)
        idx = self._key_order[pos]
        if not np.array_equal(self._sorted_keys[pos], k):
            raise KeyError("element not in table")
        return idx

    def index(self, images) -> int:
        return int(self.index_of(np.asarray(images, dtype=self.E.dtype))[0])

    def perm(self, i: int) -> tuple:
        return tuple(int(v) for v in self.E[i])

    def mul(self, i, j) -> np.ndarray:
        """Indices of ``E[i] * E[j]`` (apply ``E[j]`` first)."""
        i = np.atleast_1d(i)
        j = np.atleast_1d(j)
        i, j = np.broadcast_arrays(i, j)
        rows = np.take_along_axis(self.E[i], self.E[j].astype(np.intp), axis=1)
        return self.index_of(rows)

    def conj_action(self, s: int) -> np.ndarray:
        """Permutation of all indices ``x -> s^-1 x s``."""
        s_arr = self.E[s].astype(np.intp)
        sinv = self.E[self.inv[s]]
        return self.index_of(sinv[self.E[:, s_arr]])

    def conj_action_external(self, a: tuple) -> np.ndarray:
        """Conjugation ``x -> a^-1 x a`` by a permutation normalizing the group."""
        a_arr = np.asarray(a, dtype=np.intp)
        ainv = np.argsort(a_arr).astype(self.E.dtype)
        return self.index_of(ainv[self.E[:, a_arr]])

    def centralizer_mask(self, x: int) -> np.ndarray:
        xr = self.E[x]
        return np.all(self.E[:, xr.astype(np.intp)] == xr[self.E.astype(np.intp)], axis=1)

    def element_orders(self, idx) -> np.ndarray:
        idx = np.atleast_1d(np.asarray(idx, dtype=np.int64))
        out = np.zeros(len(idx), dtype=np.int64)
        cur = idx.copy()
        k = 1
        live = np.arange(len(idx))
        while len(live):
            done = cur[live] == self.identity
            out[live[done]] = k
            live = live[~done]
            if not len(live):
                break
            cur[live] = self.mul(cur[live], idx[live])
            k += 1
        return out


def orbits_of(perms: list[np.ndarray], size: int) -> np.ndarray:
    """Orbit labels of the group generated by index permutations.

    Labels are the minimal index in each orbit.
    """
    if not perms:
        return np.arange(size)
    src = np.concatenate([np.arange(size)] * len(perms))
    dst = np.concatenate(perms)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(size, size))
    _, labels = connected_components(graph, directed=True, connection="weak")
    mins = np.full(labels.max() + 1, size, dtype=np.int64)
    np.minimum.at(mins, labels, np.arange(size))
    return mins[labels]
