"""Exact LOS and single-surface-reflection MIMO channel synthesis."""
__version__ = "0.1.0"

from .channel import (ChannelMatrix, Provenance, Scenario, build, build_exact,
                      build_image_oracle, build_los_oracle, build_paraxial)
from .exceptions import (ConfigError, ConvergenceError, GeometryError,
                         GuardError, SpecMimoError)
from .geometry import (ArraySpec, equivalent_distance, incidence_angle,
                       projected_tilts)
from .materials import (CONCRETE, FLOORBOARD, PERFECT_CONDUCTOR, PLASTERBOARD,
                        Material, Wavenumbers, builtin_materials, get_material)
from .mimo import (analyze, capacity_upper_bound, dof_count,
                   normalized_eigenvalues, optimal_spacing, pathloss,
                   rayleigh_spacing, waterfill_capacity)
from .quadrature import ContourConfig, build_contour, sommerfeld_h
from .spectrum import KernelMode

__all__ = [
    "ArraySpec", "CONCRETE", "ChannelMatrix", "ConfigError", "ContourConfig",
    "ConvergenceError", "FLOORBOARD", "GeometryError", "GuardError",
    "KernelMode", "Material", "PERFECT_CONDUCTOR", "PLASTERBOARD",
    "Provenance", "Scenario", "SpecMimoError", "Wavenumbers", "analyze",
    "build", "build_contour", "build_exact", "build_image_oracle",
    "build_los_oracle", "build_paraxial", "builtin_materials",
    "capacity_upper_bound", "dof_count", "equivalent_distance",
    "get_material", "incidence_angle", "normalized_eigenvalues",
    "optimal_spacing", "pathloss", "projected_tilts", "rayleigh_spacing",
    "sommerfeld_h", "waterfill_capacity",
]
