"""Permutation-group engine: stabilizer chains, classes, standard families."""

from gsa.permgroup.altsym import AltSymResult, identify_alt_sym as identify_alt_sym_gens
from gsa.permgroup.elements import ElementTable, GroupTooLarge, orbits_of
from gsa.permgroup.families import (
    StandardGroup,
    abelian,
    alternating,
    dihedral,
    psl2,
    sl2,
    standard_groups,
    symmetric,
)
from gsa.permgroup.group import (
    ConjClass,
    NotInGroup,
    PermGroup,
    build_group,
    centralizer,
    class_of,
    conjugacy_classes,
    is_two_generated_by,
    membership,
)


def identify_alt_sym(G: PermGroup) -> str:
    """``"Alt"``, ``"Sym"`` or ``"Other"`` for ``G`` on its ``G.degree`` points."""
    return identify_alt_sym_gens(G._gens, G.degree).kind


__all__ = [
    "AltSymResult", "ConjClass", "ElementTable", "GroupTooLarge", "NotInGroup",
    "PermGroup", "StandardGroup", "abelian", "alternating", "build_group",
    "centralizer", "class_of", "conjugacy_classes", "dihedral", "identify_alt_sym",
    "identify_alt_sym_gens", "is_two_generated_by", "membership", "orbits_of",
    "psl2", "sl2", "standard_groups", "symmetric",
]
