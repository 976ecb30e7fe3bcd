"""Workbench for finite effect algebras.

Validation of the partial-sum axioms, derived order and substructures
(sharp elements, blocks, centers), constructions (Boolean algebras,
chains, horizontal sums, products, intervals), exact rational state
solving with independent certificates, isomorph-free enumeration, and an
executable registry of structural claims.
"""

from .core import FiniteEffectAlgebra, derive_order, is_valid, validate

__all__ = ["FiniteEffectAlgebra", "derive_order", "is_valid", "validate"]
__version__ = "0.1.0"
