"""Maximal local Schur indices of Schur algebras over abelian number fields."""

from .errors import (
    BoundExceededError,
    DomainError,
    InvariantViolation,
    OracleRefusal,
    SchurIndexError,
)
from .field import AbelianField, cyclotomic, make_field, subfields
from .frame import build_frame, extend_frame
from .index import IndexOptions, IndexReport, beta, nu
from .oracle import OracleLimits, brute_force_beta

__all__ = [
    "AbelianField", "BoundExceededError", "DomainError", "IndexOptions", "IndexReport",
    "InvariantViolation", "OracleLimits", "OracleRefusal", "SchurIndexError", "beta",
    "brute_force_beta", "build_frame", "cyclotomic", "extend_frame", "make_field", "nu",
    "subfields",
]
