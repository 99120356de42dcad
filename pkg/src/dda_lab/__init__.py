"""dda_lab: exact verification of distributive double algebras, their
module algebras, Galois extensions and braided scalar extensions."""

from .fields import QQ, PrimeField, field_from_descriptor
from .reporting import Check, CheckFailure, Report

__all__ = [
    "QQ",
    "PrimeField",
    "field_from_descriptor",
    "Check",
    "CheckFailure",
    "Report",
]
