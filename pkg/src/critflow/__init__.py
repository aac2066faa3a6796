"""Exact computations for critical points of master functions and mKdV flows."""
from .exactalg import Poly, MultiPoly, RatFun, wronskian, linear_solve
from .combin import Partition, Maya, KdVSet, MKdVSetTuple
from .genpop import PolyTuple, generate_multi
from .miura import MiuraOper, LaurentMat, mkdv_vector_field, verify_theorem_main
from .kdv import verify_mkdv_to_kdv
from .sato import GrSpace, GrTuple, LaurentVec, tau, x_equals_y_check

__version__ = "0.1.0"

__all__ = [
    "Poly", "MultiPoly", "RatFun", "wronskian", "linear_solve",
    "Partition", "Maya", "KdVSet", "MKdVSetTuple",
    "PolyTuple", "generate_multi",
    "MiuraOper", "LaurentMat", "mkdv_vector_field", "verify_theorem_main",
    "verify_mkdv_to_kdv",
    "GrSpace", "GrTuple", "LaurentVec", "tau", "x_equals_y_check",
]
