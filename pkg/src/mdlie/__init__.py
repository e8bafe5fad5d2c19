"""Exact coadjoint-orbit analysis of real Lie algebras given by structure constants."""

__version__ = "0.1.0"

from .algebra import BracketTable, LieAlgebra, Subspace, validate  # noqa: E402
from .coadjoint import kirillov_form, orbit_dimension, stabilizer, symbolic_kirillov  # noqa: E402
from .md import MdVerdict, VerdictKind, generic_rank, md_check, scan_ranks  # noqa: E402

__all__ = [
    "BracketTable",
    "LieAlgebra",
    "MdVerdict",
    "Subspace",
    "VerdictKind",
    "generic_rank",
    "kirillov_form",
    "md_check",
    "orbit_dimension",
    "scan_ranks",
    "stabilizer",
    "symbolic_kirillov",
    "validate",
]
