"""Whole-vehicle forces, efficiency, pitch/roll moments and actuation energy of a winged glider.

The vehicle is a prolate-spheroid hull with one rectangular wing through its
axis. Forces are built up from components:

* wing: sectional polar with a finite-span lift factor AR / (AR + 2) and
  induced drag C_L^2 / (pi AR e);
* hull: friction drag from a streamlined-body form law, a linear viscous
  normal force acting aft of the centre of volume, and the Munk moment of
  potential flow;
* pitch moment about the centre of gravity, nose-up positive.

All force coefficients of the vehicle are referred to ``reference_area_m2``
(by default the wing planform area). Angle of attack is the angle between the
hull axis and the free stream; the wing chord of the undeformed section sits
at ``wing_incidence_deg`` to the hull axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ContractError
from .hydro.drag import DragModel, skin_friction
from .tabular import read_table, write_json, write_table

__all__ = [
    "VehicleConfig",
    "VehicleForces",
    "EfficiencyCurve",
    "StabilityResult",
    "REFERENCE_UUV",
    "soft_wing_vehicle",
    "scale_to_reynolds",
    "vehicle_forces",
    "force_table",
    "efficiency",
    "efficiency_curve",
    "zero_lift_alpha",
    "static_stability",
    "roll_moment",
    "actuation_energy",
    "lamb_coefficients",
    "hull_drag_coefficient",
    "write_forces_csv",
    "write_efficiency_csv",
    "read_efficiency_csv",
    "write_moment_csv",
    "write_vehicle_json",
]


def _naca_section_moments(t):
    """Area / c^2 and centroid x / c of a symmetric NACA 4-digit section of thickness ratio t."""
    x = 0.5 * (1.0 - np.cos(np.linspace(0.0, np.pi, 2001)))
    yt = 5 * t * (0.2969 * np.sqrt(x) - 0.1260 * x - 0.3516 * x**2 + 0.2843 * x**3 - 0.1036 * x**4)
    area = np.trapezoid(2 * yt, x)
    return float(area), float(np.trapezoid(2 * yt * x, x) / area)


@dataclass(frozen=True)
class VehicleConfig:
    fuselage_length_m: float
    fuselage_diameter_m: float
    wing_span_m: float = 0.714
    wing_chord_m: float = 0.230
    wing_incidence_deg: float = 0.0
    wing_x_m: float | None = None  # quarter chord aft of the nose; default 0.42 L
    reference_area_m2: float | None = None  # default: wing planform area
    cg_x_m: float | None = None  # required when density_model == "explicit"
    density_model: str = "uniform"
    wing_thickness_ratio: float = 0.16
    oswald_e: float = 0.9
    hull_lift_slope: float = 1.0  # per radian, on the hull frontal area
    hull_lift_x_frac: float = 0.6  # centre of the viscous hull normal force, fraction of L
    name: str = "vehicle"

    def __post_init__(self):
        if self.wing_x_m is None:
            object.__setattr__(self, "wing_x_m", 0.42 * self.fuselage_length_m)
        if self.reference_area_m2 is None:
            object.__setattr__(self, "reference_area_m2", self.wing_span_m * self.wing_chord_m)
        for f in ("fuselage_length_m", "fuselage_diameter_m", "wing_span_m", "wing_chord_m", "wing_x_m",
                  "reference_area_m2"):
            if not getattr(self, f) > 0:
                raise ContractError(f"{f} must be positive")
        if not self.wing_x_m < self.fuselage_length_m:
            raise ContractError("wing must sit ahead of the tail (wing_x_m < fuselage_length_m)")
        if not 0 < self.oswald_e <= 1:
            raise ContractError("span efficiency e must lie in (0, 1]")
        if self.density_model not in ("uniform", "explicit"):
            raise ContractError("density_model must be 'uniform' or 'explicit'")
        if self.density_model == "explicit" and self.cg_x_m is None:
            raise ContractError("explicit density model needs cg_x_m")

    @property
    def aspect_ratio(self):
        return self.wing_span_m / self.wing_chord_m

    @property
    def frontal_area_m2(self):
        return math.pi / 4 * self.fuselage_diameter_m**2

    @property
    def hull_volume_m3(self):
        return math.pi / 6 * self.fuselage_length_m * self.fuselage_diameter_m**2

    @property
    def cg(self):
        """Centre of gravity; for uniform density, the centroid of hull plus wing volume."""
        if self.density_model == "explicit":
            return float(self.cg_x_m)
        area, xc = _naca_section_moments(self.wing_thickness_ratio)
        v_wing = area * self.wing_chord_m**2 * self.wing_span_m
        x_wing = self.wing_x_m + (xc - 0.25) * self.wing_chord_m
        v_hull = self.hull_volume_m3
        return (v_hull * 0.5 * self.fuselage_length_m + v_wing * x_wing) / (v_hull + v_wing)


# Reference vehicle: wing chord 0.213 m (the length behind Re = U L / nu = 1.06e5
# at 0.5 m/s). Hull dimensions are not published; these are representative
# glider proportions (fineness ratio about 7).
REFERENCE_UUV = VehicleConfig(
    fuselage_length_m=1.0,
    fuselage_diameter_m=0.14,
    wing_span_m=0.373,
    wing_chord_m=0.213,
    wing_thickness_ratio=0.09,
    name="reference-uuv",
)


def scale_to_reynolds(config, re_target, u_mps, nu=1.0e-6):
    """Geometrically similar vehicle whose wing chord gives ``re_target`` at ``u_mps``."""
    if not re_target > 0 or not u_mps > 0:
        raise ContractError("Reynolds number and speed must be positive")
    s = (re_target * nu / u_mps) / config.wing_chord_m
    return replace(
        config,
        fuselage_length_m=config.fuselage_length_m * s,
        fuselage_diameter_m=config.fuselage_diameter_m * s,
        wing_span_m=config.wing_span_m * s,
        wing_chord_m=config.wing_chord_m * s,
        wing_x_m=config.wing_x_m * s,
        reference_area_m2=config.reference_area_m2 * s * s,
        cg_x_m=None if config.cg_x_m is None else config.cg_x_m * s,
    )


def soft_wing_vehicle(re_target=1.06e5, u_mps=0.26, wing_chord_m=0.230, wing_span_m=0.714, base=REFERENCE_UUV):
    """Reference vehicle scaled to ``re_target`` at ``u_mps`` with the soft wing fitted at zero incidence."""
    scaled = scale_to_reynolds(base, re_target, u_mps)
    return replace(
        scaled,
        wing_chord_m=wing_chord_m,
        wing_span_m=wing_span_m,
        wing_incidence_deg=0.0,
        wing_thickness_ratio=0.16,
        reference_area_m2=wing_chord_m * wing_span_m,
        name="soft-wing-uuv",
    )


def lamb_coefficients(length_m, diameter_m):
    """Axial and transverse added-mass coefficients (k1, k2) of a prolate spheroid."""
    if diameter_m >= length_m:
        raise ContractError("a prolate spheroid needs length > diameter")
    e = math.sqrt(1.0 - (diameter_m / length_m) ** 2)
    log = math.log((1 + e) / (1 - e))
    a0 = 2 * (1 - e**2) / e**3 * (0.5 * log - e)
    b0 = 1 / e**2 - (1 - e**2) / (2 * e**3) * log
    return a0 / (2 - a0), b0 / (2 - b0)


def hull_drag_coefficient(config, flow, drag_model=None):
    """Zero-incidence hull drag on the frontal area: C_f [3 (l/d) + 4.5 (d/l)^0.5 + 21 (d/l)^2].

    C_f is the ITTC-1957 turbulent line, 0.075 / (log10 Re_L - 2)^2; the hull
    boundary layer is taken as tripped at the nose.
    """
    re_l = flow.u_mps * config.fuselage_length_m / flow.nu_m2ps
    skin_friction(re_l, drag_model or DragModel())  # range check only
    cf = 0.075 / (math.log10(re_l) - 2.0) ** 2
    f = config.fuselage_length_m / config.fuselage_diameter_m
    return cf * (3.0 * f + 4.5 / math.sqrt(f) + 21.0 / f**2)


@dataclass(frozen=True)
class VehicleForces:
    lift_n: float
    drag_n: float
    pitch_moment_nm: float  # about the cg, nose-up positive
    roll_moment_nm: float
    alpha_deg: float
    c_l: float = math.nan
    c_d: float = math.nan

    def __post_init__(self):
        if not self.drag_n > 0:
            raise ContractError("vehicle drag must be positive")


def _wing_coefficients(config, wing_polar, alpha_deg):
    c_l, c_d, c_m = wing_polar.at(alpha_deg + config.wing_incidence_deg)
    ar = config.aspect_ratio
    cl_w = c_l * ar / (ar + 2.0)
    cdi = cl_w**2 / (math.pi * ar * config.oswald_e)
    return cl_w, c_d + cdi, c_m


def vehicle_forces(config, wing_polar, alpha_deg, flow, drag_model=None):
    """Lift, drag and pitch moment of the whole vehicle at incidence ``alpha_deg``."""
    q = flow.dynamic_pressure_pa
    a = math.radians(alpha_deg)
    s_w = config.wing_span_m * config.wing_chord_m

    cl_w, cd_w, cm_w = _wing_coefficients(config, wing_polar, alpha_deg)
    lift_w, drag_w = q * s_w * cl_w, q * s_w * cd_w

    af = config.frontal_area_m2
    n_hull = q * af * config.hull_lift_slope * a  # viscous normal force, normal to the hull axis
    lift_h = n_hull * math.cos(a)
    drag_h = q * af * hull_drag_coefficient(config, flow, drag_model) + n_hull * math.sin(a)

    lift = lift_w + lift_h
    drag = drag_w + drag_h

    cg = config.cg
    n_w = lift_w * math.cos(a) + drag_w * math.sin(a)
    k1, k2 = lamb_coefficients(config.fuselage_length_m, config.fuselage_diameter_m)
    munk = q * config.hull_volume_m3 * (k2 - k1) * math.sin(2 * a)
    pitch = (
        n_w * (cg - config.wing_x_m)
        + n_hull * (cg - config.hull_lift_x_frac * config.fuselage_length_m)
        + q * s_w * config.wing_chord_m * cm_w
        + munk
    )
    s_ref = config.reference_area_m2
    return VehicleForces(lift, drag, pitch, 0.0, float(alpha_deg), lift / (q * s_ref), drag / (q * s_ref))


def force_table(config, wing_polar, alphas, flow, drag_model=None):
    return [vehicle_forces(config, wing_polar, a, flow, drag_model) for a in sorted(alphas)]


def efficiency(forces):
    """Lift-to-drag ratio L / D; signed, so it changes sign with the lift."""
    if not forces.drag_n > 0:
        raise ZeroDivisionError("efficiency needs positive drag")
    return forces.lift_n / forces.drag_n


@dataclass(frozen=True)
class EfficiencyCurve:
    rows: tuple  # (alpha_deg, eta)
    inflation_mL: float = 0.0
    u_mps: float = math.nan

    def __post_init__(self):
        rows = tuple((float(a), float(e)) for a, e in self.rows)
        if any(b[0] <= a[0] for a, b in zip(rows, rows[1:])):
            raise ContractError("efficiency rows must be sorted by alpha without duplicates")
        object.__setattr__(self, "rows", rows)

    @property
    def alpha_deg(self):
        return np.array([r[0] for r in self.rows])

    @property
    def eta(self):
        return np.array([r[1] for r in self.rows])

    def best(self, alpha_min=-math.inf, alpha_max=math.inf):
        """(alpha, eta) of the maximum efficiency within [alpha_min, alpha_max]."""
        cand = [r for r in self.rows if alpha_min <= r[0] <= alpha_max]
        if not cand:
            raise ContractError("no efficiency rows in the requested range")
        return max(cand, key=lambda r: (r[1], -r[0]))

    def scaled(self, factor):
        return EfficiencyCurve(tuple((a, factor * e) for a, e in self.rows), self.inflation_mL, self.u_mps)


def efficiency_curve(config, polar, alphas, flow, drag_model=None):
    rows = tuple((f.alpha_deg, efficiency(f)) for f in force_table(config, polar, alphas, flow, drag_model))
    return EfficiencyCurve(rows, polar.inflation_mL, flow.u_mps)


def zero_lift_alpha(forces):
    """Incidence (deg) where the least-squares line through the vehicle lift crosses zero."""
    a = np.array([f.alpha_deg for f in forces])
    lift = np.array([f.lift_n for f in forces])
    if len(a) < 2:
        raise ContractError("need at least two incidences for a zero-lift angle")
    slope, intercept = np.polyfit(a, lift, 1)
    return float(-intercept / slope)


@dataclass(frozen=True)
class StabilityResult:
    """Static pitch stability of a moment curve.

    ``m_alpha`` is the slope (per degree) of the moment in the criterion's
    convention, restoring (nose-down) moment positive, so the criterion reads
    ``m_alpha > 0``. ``m_alpha_abs`` is the slope of |M| taken literally, and
    ``m_alpha_classical`` the slope of the nose-up moment (stable when < 0).
    Iterating yields ``(stable_range, m_alpha)``.
    """

    stable_range: tuple
    m_alpha: np.ndarray
    m_alpha_abs: np.ndarray
    m_alpha_classical: np.ndarray
    alpha_deg: np.ndarray

    def __iter__(self):
        return iter((self.stable_range, self.m_alpha))


def _intervals(alpha, mask):
    """Maximal runs of consecutive True entries as (first alpha, last alpha)."""
    out, start = [], None
    for i, m in enumerate(mask):
        if m and start is None:
            start = i
        if start is not None and (not m or i == len(mask) - 1):
            end = i if m else i - 1
            out.append((alpha[start], alpha[end]))
            start = None
    return tuple((float(a), float(b)) for a, b in out)


def static_stability(moment_curve, nose_up_positive=False):
    """Intervals of incidence where the restoring-moment slope is positive.

    The criterion is dM/dalpha > 0 with M measured positive in the restoring
    (nose-down) sense, which is the classical condition dM_nose_up/dalpha < 0.
    Pass ``nose_up_positive=True`` for moments in the usual nose-up-positive
    convention, such as :attr:`VehicleForces.pitch_moment_nm`.
    """
    pts = np.asarray(moment_curve, dtype=float).reshape(-1, 2)
    if len(pts) < 3:
        raise ContractError("static stability needs at least 3 points")
    alpha, m = pts[:, 0], pts[:, 1]
    if np.any(np.diff(alpha) <= 0):
        raise ContractError("moment curve must be sorted by alpha without duplicates")
    m_nose_up = m if nose_up_positive else -m
    classical = np.gradient(m_nose_up, alpha)
    criterion = -classical
    literal = np.gradient(np.abs(m), alpha)
    return StabilityResult(_intervals(alpha, criterion > 0), criterion, literal, classical, alpha)


def roll_moment(config, polar_left, polar_right, flow, alpha_deg=0.0):
    """Rolling moment (N m) from different sections on the two half-wings; right wing up positive.

    Each half-wing carries its own lift at the mid semi-span arm, span / 4.
    """
    if not math.isclose(polar_left.re, polar_right.re, rel_tol=1e-6):
        raise ContractError(f"polars at different Reynolds numbers: {polar_left.re:g} vs {polar_right.re:g}")
    q = flow.dynamic_pressure_pa
    half_area = 0.5 * config.wing_span_m * config.wing_chord_m
    cl_l = _wing_coefficients(config, polar_left, alpha_deg)[0]
    cl_r = _wing_coefficients(config, polar_right, alpha_deg)[0]
    arm = 0.25 * config.wing_span_m
    return q * half_area * (cl_r - cl_l) * arm


def actuation_energy(delta_p_pa, delta_v_m3):
    """Hydraulic work of one morph, E = dP dV (J)."""
    if delta_p_pa < 0 or delta_v_m3 < 0:
        raise ContractError("pressure and volume must be non-negative")
    return float(delta_p_pa) * float(delta_v_m3)


# ---------------------------------------------------------------------------
# Export

FORCE_COLUMNS = ("alpha_deg", "lift_n", "drag_n", "c_l", "c_d", "eta", "pitch_moment_nm")
MOMENT_COLUMNS = ("alpha_deg", "pitch_moment_nm", "m_alpha_restoring", "m_alpha_abs", "m_alpha_classical", "stable")


def write_forces_csv(path, forces, meta=None):
    rows = [(f.alpha_deg, f.lift_n, f.drag_n, f.c_l, f.c_d, efficiency(f), f.pitch_moment_nm) for f in forces]
    return write_table(path, FORCE_COLUMNS, rows, meta)


def write_efficiency_csv(path, curve, meta=None):
    info = {"inflation_mL": repr(float(curve.inflation_mL)), "u_mps": repr(float(curve.u_mps))}
    info.update(meta or {})
    return write_table(path, ("alpha_deg", "eta"), curve.rows, info)


def read_efficiency_csv(path):
    rows, meta = read_table(path, ("alpha_deg", "eta"))
    return EfficiencyCurve(
        tuple(map(tuple, rows)), float(meta.get("inflation_mL", 0.0)), float(meta.get("u_mps", "nan"))
    )


def write_moment_csv(path, forces, meta=None):
    curve = [(f.alpha_deg, f.pitch_moment_nm) for f in forces]
    st = static_stability(curve, nose_up_positive=True)
    stable = st.m_alpha > 0
    rows = [
        (a, m, s1, s2, s3, int(flag))
        for (a, m), s1, s2, s3, flag in zip(curve, st.m_alpha, st.m_alpha_abs, st.m_alpha_classical, stable)
    ]
    return write_table(path, MOMENT_COLUMNS, rows, meta)


def write_vehicle_json(path, forces, meta=None):
    payload = {
        "meta": dict(meta or {}),
        "columns": list(FORCE_COLUMNS),
        "rows": [[f.alpha_deg, f.lift_n, f.drag_n, f.c_l, f.c_d, efficiency(f), f.pitch_moment_nm] for f in forces],
    }
    return write_json(path, payload)
