"""Free-stream conditions and force/coefficient conversion."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ContractError

__all__ = ["FlowConditions", "ForceBreakdown", "reynolds", "coefficients_from_forces", "WATER_NU", "WATER_RHO"]

WATER_NU = 1.00e-6  # m^2/s
WATER_RHO = 1000.0  # kg/m^3


@dataclass(frozen=True)
class FlowConditions:
    u_mps: float
    nu_m2ps: float = WATER_NU
    rho_kgpm3: float = WATER_RHO
    length_m: float = 0.230

    def __post_init__(self):
        for name in ("u_mps", "nu_m2ps", "rho_kgpm3", "length_m"):
            if not getattr(self, name) > 0:
                raise ContractError(f"{name} must be strictly positive, got {getattr(self, name)}")

    @property
    def dynamic_pressure_pa(self):
        return 0.5 * self.rho_kgpm3 * self.u_mps**2

    def with_length(self, length_m):
        return FlowConditions(self.u_mps, self.nu_m2ps, self.rho_kgpm3, length_m)


@dataclass(frozen=True)
class ForceBreakdown:
    lift_n: float
    drag_n: float
    reference_area_m2: float
    dynamic_pressure_pa: float

    def __post_init__(self):
        if not self.reference_area_m2 > 0:
            raise ContractError("reference area must be positive")
        if not self.dynamic_pressure_pa > 0:
            raise ContractError("dynamic pressure must be positive")


def reynolds(flow):
    """Re = U L / nu."""
    return flow.u_mps * flow.length_m / flow.nu_m2ps


def coefficients_from_forces(forces):
    """(c_l, c_d) = (L, D) / (q S)."""
    qs = forces.dynamic_pressure_pa * forces.reference_area_m2
    return forces.lift_n / qs, forces.drag_n / qs
