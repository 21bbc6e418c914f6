"""Plane-strain hyperelastic model of the two-chamber soft wing section."""

from .fem import DEFAULT_MATERIALS, FEModel, assemble
from .materials import (
    ALUMINIUM,
    ECOFLEX_00_50,
    PLA,
    HyperelasticMaterial,
    LinearElasticMaterial,
    strain_energy_density,
)
from .mesh import Mesh2D, WingSectionSpec, read_mesh, rectangle_mesh, wing_section_mesh, write_mesh
from .pressure import (
    INFLATION_PRESSURE_TABLE,
    PRINTED_FIT,
    PressureFit,
    default_pressure_fit,
    fit_pressure_curve,
    pressure_for_inflation,
)
from .solver import (
    INFLATED_CHAMBER,
    DeformationState,
    SolverSettings,
    deformed_profile,
    solve_inflation,
    trailing_edge_deflection,
)
