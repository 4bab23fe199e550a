"""Permutations on {0, ..., n-1} with 1-based cycle-notation I/O.

Composition convention throughout the package: ``(p * q)(i) == p(q(i))``,
i.e. ``q`` is applied first.
"""

from __future__ import annotations

import math
import re
from functools import reduce
from typing import Iterable, Sequence

__all__ = [
    "Permutation",
    "DegreeMismatch",
    "compose",
    "invert",
    "perm_order",
    "cycle_lengths",
    "perm_ops",
    "parse_cycles",
    "format_cycles",
]


class DegreeMismatch(ValueError):
    pass


# Raw tuple helpers. Hot loops elsewhere use these directly.

def compose(p: tuple, q: tuple) -> tuple:
    return tuple(map(p.__getitem__, q))


def invert(p: Sequence[int]) -> tuple:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def cycle_lengths(p: Sequence[int]) -> list[int]:
    n = len(p)
    seen = bytearray(n)
    out = []
    for i in range(n):
        if seen[i]:
            continue
        k = 0
        j = i
        while not seen[j]:
            seen[j] = 1
            j = p[j]
            k += 1
        out.append(k)
    return out


def perm_order(p: Sequence[int]) -> int:
    return reduce(math.lcm, cycle_lengths(p), 1)


def cycles(p: Sequence[int]) -> list[list[int]]:
    """Nontrivial cycles, each starting at its smallest point."""
    n = len(p)
    seen = bytearray(n)
    out = []
    for i in range(n):
        if seen[i] or p[i] == i:
            seen[i] = 1
            continue
        c = [i]
        seen[i] = 1
        j = p[i]
        while j != i:
            seen[j] = 1
            c.append(j)
            j = p[j]
        out.append(c)
    return out


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> tuple:
    """Parse ``(1 2 3)(4 5)`` (1-based, commas optional) into an image tuple.

    ``()`` is the identity. Without ``degree`` the largest mentioned point
    fixes the degree.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty permutation text")
    if _CYCLE_RE.sub("", s).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cyc = []
    for body in _CYCLE_RE.findall(s):
        pts = [int(t) for t in re.split(r"[,\s]+", body.strip()) if t]
        if any(x < 1 for x in pts):
            raise ValueError(f"points are 1-based: {text!r}")
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated point in cycle: {text!r}")
        cyc.append([x - 1 for x in pts])
    top = max((max(c) + 1 for c in cyc if c), default=0)
    n = top if degree is None else degree
    if top > n:
        raise DegreeMismatch(f"point {top} exceeds degree {n}")
    img = list(range(n))
    used = set()
    for c in cyc:
        if used.intersection(c):
            raise ValueError(f"cycles are not disjoint: {text!r}")
        used.update(c)
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    return tuple(img)


def format_cycles(p: Sequence[int]) -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cs)


class Permutation:
    """An immutable permutation of ``range(degree)``."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        img = tuple(int(i) for i in images)
        if sorted(img) != list(range(len(img))):
            raise ValueError("images do not form a bijection")
        self.images = img

    @classmethod
    def _raw(cls, images: tuple) -> "Permutation":
        obj = object.__new__(cls)
        obj.images = images
        return obj

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text: str, degree: int | None = None) -> "Permutation":
        return cls._raw(parse_cycles(text, degree))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        return Permutation._raw(compose(self.images, other.images))

    def inverse(self) -> "Permutation":
        return Permutation._raw(invert(self.images))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = tuple(range(self.degree))
        b = base.images
        while k:
            if k & 1:
                out = compose(out, b)
            b = compose(b, b)
            k >>= 1
        return Permutation._raw(out)

    def order(self) -> int:
        return perm_order(self.images)

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(cycle_lengths(self.images)))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def is_even(self) -> bool:
        return sum(c - 1 for c in cycle_lengths(self.images)) % 2 == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __str__(self) -> str:
        return format_cycles(self.images)

    def __repr__(self) -> str:
        return f"Permutation.from_cycles({str(self)!r}, {self.degree})"


def perm_ops(p: Permutation, q: Permutation) -> dict:
    """Product ``p*q``, inverse of ``p`` and order of ``p``."""
    return {"product": p * q, "inverse_of_p": p.inverse(), "order_of_p": p.order()}
