"""Shapes of pure cubic fields: exact shape points, reduction into the
GL(2, Z) fundamental domain, and the carefree-couple counts behind their
regularized equidistribution."""

from .field import (CarefreeCouple, DegenerateFieldError, FieldType, IntegralBasis, PureCubicField,
                    canonicalize, classify, enumerate_fields, field_from_couple, integral_basis)
from .shape import (ExactGram, ShapePoint, UnimodularMatrix, gram_perp, numeric_embedding_gram,
                    point_from_gram, reduce_to_fundamental_domain, shape, verify_injectivity)

__all__ = [
    "CarefreeCouple", "DegenerateFieldError", "FieldType", "IntegralBasis", "PureCubicField",
    "canonicalize", "classify", "enumerate_fields", "field_from_couple", "integral_basis",
    "ExactGram", "ShapePoint", "UnimodularMatrix", "gram_perp", "numeric_embedding_gram",
    "point_from_gram", "reduce_to_fundamental_domain", "shape", "verify_injectivity",
]
