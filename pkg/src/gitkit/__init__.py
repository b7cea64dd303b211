"""Stability of points in complex projective space under compact group actions."""

from . import kernels
from .errors import GitkitError, InputError, NumericalError, DomainError
from .lie_core import (
    AlgebraVector,
    CompactGroup,
    ComplexAlgebraVector,
    GroupPoint,
    build_group,
    custom,
    full_unitary,
    polar_decompose,
    special_unitary,
    spin_representation,
    torus,
)
from .projective import ProjectivePoint, kempf_ness_value, moment_map, mu_weight
from .flow import FlowOptions, FlowTrajectory, dominant_weight, integrate_flow
from .verdict import StabilityVerdict
from .stability import ClassifyOptions, classify, mumford_function
from .torus_geometry import moment_polytope, torus_classify

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "kernels",
    "GitkitError",
    "InputError",
    "NumericalError",
    "DomainError",
    "AlgebraVector",
    "CompactGroup",
    "ComplexAlgebraVector",
    "GroupPoint",
    "build_group",
    "custom",
    "full_unitary",
    "polar_decompose",
    "special_unitary",
    "spin_representation",
    "torus",
    "ProjectivePoint",
    "kempf_ness_value",
    "moment_map",
    "mu_weight",
    "FlowOptions",
    "FlowTrajectory",
    "dominant_weight",
    "integrate_flow",
    "StabilityVerdict",
    "ClassifyOptions",
    "classify",
    "mumford_function",
    "moment_polytope",
    "torus_classify",
]
