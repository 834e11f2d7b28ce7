"""Extreme circumscribing and enclosing cylinders of n-simplices.

Main entry points:

- :func:`critical_points` / :func:`global_min` for all critical circumscribing cylinders
- :func:`smallest_enclosing_cylinder` for tetrahedra
- :func:`enumerate_all_critical` for the regular simplex census
- :func:`enumerate_solutions` for the quartic-sum Lagrange system
"""
from .errors import (CylinderError, DegenerateError, DimensionMismatch, DimensionTooLarge, EmptyFamily,
                     EmptyInput, InputError, NoCriticalPointFound, NotEquifacial, NumericalError,
                     SchemaError, ShapeError, SingularMatrix)
from .geometry import AxisLine, Cylinder, SimplexN, box_simplex, canonical_direction, regular_tetrahedron
from .formulation import CircumFormulation, bezout_bounds
from .solver import CriticalPoint, SolverConfig, critical_points, global_min
from .regular import enumerate_all_critical, regular_min_radius, stirling_census_check
from .weissbach import enumerate_solutions
from .special import box_params, classify, equifacial_min_cylinder
from .enclosing import oracle_min_enclosing, projection_radius, smallest_enclosing_cylinder
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "AxisLine", "BACKEND", "CircumFormulation", "CriticalPoint", "Cylinder", "CylinderError", "DegenerateError",
    "DimensionMismatch", "DimensionTooLarge", "EmptyFamily", "EmptyInput", "InputError", "NoCriticalPointFound",
    "NotEquifacial", "NumericalError", "SchemaError", "ShapeError", "SimplexN", "SingularMatrix", "SolverConfig",
    "bezout_bounds", "box_params", "box_simplex", "canonical_direction", "classify", "critical_points",
    "enumerate_all_critical", "enumerate_solutions", "equifacial_min_cylinder", "global_min",
    "oracle_min_enclosing", "projection_radius", "regular_min_radius", "regular_tetrahedron",
    "smallest_enclosing_cylinder", "stirling_census_check",
]
