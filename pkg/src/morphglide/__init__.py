"""Soft camber-morphing wing analysis: hyperelastic inflation, panel hydrodynamics, vehicle and glide performance."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .geometry import (  # noqa: E402
    AirfoilProfile,
    CamberLine,
    EffectiveAoA,
    apply_camber,
    effective_aoa,
    extract_camber,
    naca4_profile,
    parabolic_camber,
    profile_rms_error,
)
from .glide import GlidePath, GlideState, compare_configs, glide_angle, range_per_cycle, simulate_sawtooth  # noqa: E402
from .hydro import FlowConditions, HydroPolar, drag_estimate, panel_solve, polar_sweep, reynolds  # noqa: E402
from .vehicle import (  # noqa: E402
    REFERENCE_UUV,
    EfficiencyCurve,
    VehicleConfig,
    actuation_energy,
    efficiency,
    efficiency_curve,
    roll_moment,
    scale_to_reynolds,
    soft_wing_vehicle,
    static_stability,
    vehicle_forces,
)
