"""Exact finite element systems: cell complexes, discrete bundles, local spaces and their verification.

All arithmetic is rational (``gmpy2.mpq``), so every identity is checked with
zero tolerance.
"""

from .bundle import DiscreteBundle, random_bundle, random_flat_bundle, trivial_bundle
from .complex import CellComplex, simplex_complex
from .fes import DofSystem, FESystem, compatibility_check, de_rham_verify, validate_system
from .meshes import Mesh, builtin_mesh, load_mesh, parse_mesh
from .ratlin import MatrixComplex, RatMatrix
from .report import Report

__version__ = "0.1.0"

__all__ = ["CellComplex", "DiscreteBundle", "DofSystem", "FESystem", "MatrixComplex", "Mesh", "RatMatrix",
           "Report", "builtin_mesh", "compatibility_check", "de_rham_verify", "load_mesh", "parse_mesh",
           "random_bundle", "random_flat_bundle", "simplex_complex", "trivial_bundle", "validate_system"]
