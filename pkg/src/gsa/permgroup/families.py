"""Standard permutation representations of the group families in the atlas.

Each constructor returns a :class:`StandardGroup` bundling the group, the
"natural" outer-automorphism generators (permutations of the same domain
normalising the group) and whatever metadata later stages need, such as the
vector labelling of the SL2 action.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gsa.perm import parse_cycles
from gsa.permgroup.group import PermGroup


@dataclass
class StandardGroup:
    name: str
    group: PermGroup
    natural_auts: list[tuple] = field(default_factory=list)
    prime: int | None = None      # for SL2 / PSL2
    kind: str = ""


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _cycle(n: int, pts) -> tuple:
    img = list(range(n))
    pts = list(pts)
    for a, b in zip(pts, pts[1:] + pts[:1]):
        img[a] = b
    return tuple(img)


def symmetric(n: int) -> StandardGroup:
    if n < 1:
        raise ValueError("Sn needs n >= 1")
    gens = [] if n == 1 else [_cycle(n, [0, 1]), _cycle(n, range(n))]
    return StandardGroup(f"S{n}", PermGroup(gens, n), kind="Sn")


def alternating(n: int) -> StandardGroup:
    if n < 1:
        raise ValueError("An needs n >= 1")
    if n < 3:
        return StandardGroup(f"A{n}", PermGroup([], n), kind="An")
    gens = [_cycle(n, [0, 1, 2])]
    if n > 3:
        gens.append(_cycle(n, range(n)) if n % 2 else _cycle(n, range(1, n)))
    auts = [_cycle(n, [0, 1])]
    return StandardGroup(f"A{n}", PermGroup(gens, n), auts, kind="An")


def dihedral(order: int) -> StandardGroup:
    """D_{2k} acting on Z/2k by x -> x+2 and x -> -x.

    The doubled domain is deliberate: the affine maps x -> ux + b of Z/2k
    normalise the group and realise all of Aut(D_{2k}), including the outer
    automorphisms that have no realisation on the k-gon (e.g. for D_8).
    """
    if order < 4 or order % 2:
        raise ValueError(f"dihedral order must be even and >= 4, got {order}")
    n = order
    rot = tuple((x + 2) % n for x in range(n))
    ref = tuple((-x) % n for x in range(n))
    auts = [tuple((x + 1) % n for x in range(n))]
    for u in range(3, n, 2):
        if math.gcd(u, n) == 1:
            auts.append(tuple((u * x) % n for x in range(n)))
    return StandardGroup(f"D{order}", PermGroup([rot, ref], n), auts, kind="D")


def abelian(n: int, m: int) -> StandardGroup:
    """Z/n x Z/m in its regular action; point (a, b) is a*m + b."""
    if n < 1 or m < 1:
        raise ValueError("abelian factors must be positive")
    deg = n * m
    pt = lambda a, b: (a % n) * m + (b % m)
    pairs = [(a, b) for a in range(n) for b in range(m)]
    gens = [tuple(pt(a + 1, b) for a, b in pairs), tuple(pt(a, b + 1) for a, b in pairs)]
    auts = []
    for u in range(2, n):
        if math.gcd(u, n) == 1:
            auts.append(tuple(pt(u * a, b) for a, b in pairs))
    for v in range(2, m):
        if math.gcd(v, m) == 1:
            auts.append(tuple(pt(a, v * b) for a, b in pairs))
    if n == m:
        auts.append(tuple(pt(b, a) for a, b in pairs))
        auts.append(tuple(pt(a + b, b) for a, b in pairs))
    name = f"Z{n}xZ{m}"
    return StandardGroup(name, PermGroup(gens, deg), auts, kind="Z")


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            return g
    return 1


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# SL2(F_p) acts on the p^2 - 1 nonzero column vectors; vector (a, b) has
# index a*p + b - 1.

def vec_index(a: int, b: int, p: int) -> int:
    return (a % p) * p + (b % p) - 1


def vec_of(i: int, p: int) -> tuple[int, int]:
    return divmod(i + 1, p)


def matrix_on_vectors(M, p: int) -> tuple:
    (a, b), (c, d) = M
    out = []
    for i in range(p * p - 1):
        x, y = vec_of(i, p)
        out.append(vec_index(a * x + b * y, c * x + d * y, p))
    return tuple(out)


def matrix_of_vector_perm(perm, p: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Recover the matrix from its action on e1 and e2."""
    c1 = vec_of(perm[vec_index(1, 0, p)], p)
    c2 = vec_of(perm[vec_index(0, 1, p)], p)
    return ((c1[0], c2[0]), (c1[1], c2[1]))


def _proj_index(x: int, y: int, p: int) -> int:
    if y % p:
        return (x * pow(y, -1, p)) % p
    return p


def matrix_on_line(M, p: int) -> tuple:
    (a, b), (c, d) = M
    out = []
    for i in range(p + 1):
        x, y = (i, 1) if i < p else (1, 0)
        out.append(_proj_index(a * x + b * y, c * x + d * y, p))
    return tuple(out)


SL2_GENERATOR_MATRICES = (((1, 1), (0, 1)), ((0, -1), (1, 0)))


def sl2(p: int) -> StandardGroup:
    if not is_prime(p):
        raise ValueError(f"SL2 needs a prime, got {p}")
    gens = [matrix_on_vectors(M, p) for M in SL2_GENERATOR_MATRICES]
    nu = _primitive_root(p)
    auts = [matrix_on_vectors(((nu, 0), (0, 1)), p)] if p > 2 else []
    return StandardGroup(f"SL2({p})", PermGroup(gens, p * p - 1), auts, prime=p, kind="SL2")


def psl2(p: int) -> StandardGroup:
    if not is_prime(p):
        raise ValueError(f"PSL2 needs a prime, got {p}")
    gens = [matrix_on_line(M, p) for M in SL2_GENERATOR_MATRICES]
    nu = _primitive_root(p)
    auts = [matrix_on_line(((nu, 0), (0, 1)), p)] if p > 2 else []
    return StandardGroup(f"PSL2({p})", PermGroup(gens, p + 1), auts, prime=p, kind="PSL2")


def read_generator_file(text: str) -> tuple[list[tuple], list[tuple]]:
    """Parse a generator file: one permutation per line, optional ``aut:`` section.

    Blank lines and ``#`` comments are ignored. All permutations share the
    largest degree mentioned.
    """
    gens_txt: list[str] = []
    auts_txt: list[str] = []
    target = gens_txt
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("aut:"):
            target = auts_txt
            line = line[4:].strip()
            if not line:
                continue
        target.append(line)
    if not gens_txt:
        raise ValueError("generator file lists no permutations")
    deg = max(len(parse_cycles(s)) for s in gens_txt + auts_txt)
    gens = [parse_cycles(s, deg) for s in gens_txt]
    auts = [parse_cycles(s, deg) for s in auts_txt]
    return gens, auts


def from_file(path: str) -> StandardGroup:
    with open(path, encoding="utf-8") as fh:
        gens, auts = read_generator_file(fh.read())
    return StandardGroup(f"perm:{path}", PermGroup(gens, len(gens[0])), auts, kind="File")


def standard_groups(spec) -> StandardGroup:
    """Resolve a group descriptor (string or parsed spec) to a permutation group."""
    from gsa.atlas import GroupSpec, parse_group_spec

    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    assert isinstance(spec, GroupSpec)
    fam, prm = spec.family, spec.params
    if fam == "Sn":
        return symmetric(prm[0])
    if fam == "An":
        return alternating(prm[0])
    if fam == "Dih":
        return dihedral(prm[0])
    if fam in ("ZnSq", "ZmZn"):
        return abelian(prm[0], prm[1])
    if fam == "Cyc":
        return abelian(prm[0], 1)
    if fam == "SL2":
        return sl2(prm[0])
    if fam == "PSL2":
        return psl2(prm[0])
    if fam == "Named":
        return named(spec.path)
    if fam == "File":
        return from_file(spec.path)
    raise ValueError(f"unknown family {fam!r}")


def named(name: str) -> StandardGroup:
    from importlib import resources

    fname = f"{name}.txt"
    try:
        text = resources.files("gsa.data").joinpath(fname).read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ValueError(f"no bundled group named {name!r}") from exc
    gens, auts = read_generator_file(text)
    return StandardGroup(name, PermGroup(gens, len(gens[0])), auts, kind="Named")
