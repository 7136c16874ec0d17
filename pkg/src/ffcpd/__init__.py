"""Exact rank-R canonical polyadic decomposition of 3-tensors over finite fields."""

from .compress import Compression, Cpd, Tensor3, compress, lift, mode_reduce, reconstruct
from .field import Field, canonical_normalize, enumerate_vectors, is_monomial, make_field, parse_field
from .linalg import Matrix, rank, rref_with_certificate
from .solver import SolveReport, min_rank, solve

__all__ = [
    "Compression",
    "Cpd",
    "Field",
    "Matrix",
    "SolveReport",
    "Tensor3",
    "canonical_normalize",
    "compress",
    "enumerate_vectors",
    "is_monomial",
    "lift",
    "make_field",
    "min_rank",
    "mode_reduce",
    "parse_field",
    "rank",
    "reconstruct",
    "rref_with_certificate",
    "solve",
]
