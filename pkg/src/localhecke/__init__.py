"""Exact computations with local fields, Witt vectors, Lubin-Tate formal
groups and congruence-level Hecke algebras over close local fields."""

from .family import INF, Clopen, Family, constant, glue, make_family, stalk
from .localfield import (
    BUILTIN_FIELDS,
    CloseFieldIso,
    FieldDesc,
    FieldError,
    PrecisionError,
    TruncElem,
    TruncRing,
    close_field_iso,
    load_field,
    make_field,
    spread_extension,
    teichmuller,
)
from .witt import Theta, WittRingTable, WittVec, law_polynomials, specialize_check
from .lubin_tate import ClassicalLT, LubinTate, TorsionTower, torsion_tower
from .hecke import BudgetError, DoubleCoset, GrpElt, HeckeAlgebra, HeckeElem, cartan_decompose, grp_elt
from .closefields import CloseFieldPair, eta_map, family_hecke, match_double_cosets, verify_algebra_iso

__version__ = "0.1.0"
