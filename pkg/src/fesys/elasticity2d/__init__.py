"""Two-dimensional elasticity element families built as finite element systems."""

from .families import FAMILIES, Family, get_family
from .system import GlobalSystem, LocalElement, assemble, build_local, dof_values, local_dofs

__all__ = ["FAMILIES", "Family", "get_family", "GlobalSystem", "LocalElement", "assemble", "build_local",
           "dof_values", "local_dofs"]
