"""Sum-rank Hamming codes, simplex duals, partial spreads, syndrome decoding,
multishot matrix-multiplicative channels, and locally repairable codes."""

from . import errors
from .galois import FieldCtx, FieldElement, Matrix, field_ctx, matrix_rep

__version__ = "0.1.0"

__all__ = [
    "errors",
    "FieldCtx",
    "FieldElement",
    "Matrix",
    "field_ctx",
    "matrix_rep",
    "__version__",
]
