"""Sectional hydrodynamics: inviscid panel solution plus an empirical drag buildup."""
from .drag import DragModel, drag_estimate, form_factor, skin_friction
from .flow import FlowConditions, ForceBreakdown, coefficients_from_forces, reynolds
from .panel import PanelSolution, panel_solve
from .polar import HydroPolar, polar_filename, polar_sweep, read_polar_csv, write_polar_csv, write_polar_json

__all__ = [
    "DragModel",
    "drag_estimate",
    "form_factor",
    "skin_friction",
    "FlowConditions",
    "ForceBreakdown",
    "coefficients_from_forces",
    "reynolds",
    "PanelSolution",
    "panel_solve",
    "HydroPolar",
    "polar_filename",
    "polar_sweep",
    "read_polar_csv",
    "write_polar_csv",
    "write_polar_json",
]
