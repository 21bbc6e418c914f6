"""Steady-glide performance: glide angle, sawtooth trajectories and range comparisons.

A buoyancy-driven glider descends and climbs along straight legs whose path
angle below (or above) the horizontal is atan(1 / eta). One dive cycle of
depth amplitude h therefore covers 2 h eta horizontally. The climb is flown
with the mirrored section (the opposite chamber inflated), so both legs share
the same efficiency; only scheduled morphs are charged to the energy ledger.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, NoSteadyGlideError, ScheduleError
from .structural.pressure import default_pressure_fit, pressure_for_inflation
from .tabular import write_json, write_table
from .vehicle import EfficiencyCurve, actuation_energy

__all__ = [
    "GlideState",
    "GlidePath",
    "MorphEvent",
    "glide_angle",
    "range_per_cycle",
    "simulate_sawtooth",
    "compare_configs",
    "format_report",
    "write_path_csv",
    "write_report_json",
    "PATH_COLUMNS",
]

PATH_COLUMNS = ("t_s", "x_m", "depth_m", "phase", "inflation_mL")
PHASES = ("descending", "ascending")


@dataclass(frozen=True)
class GlideState:
    t_s: float
    horizontal_m: float
    depth_m: float
    u_mps: float
    glide_angle_deg: float
    phase: str
    inflation_mL: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.glide_angle_deg < 90.0:
            raise ContractError(f"glide angle must lie in (0, 90) deg, got {self.glide_angle_deg}")
        if self.depth_m < -1e-12:
            raise ContractError("depth must be non-negative")
        if self.phase not in PHASES:
            raise ContractError(f"phase must be one of {PHASES}")


@dataclass(frozen=True)
class MorphEvent:
    cycle: int
    from_mL: float
    to_mL: float
    pressure_pa: float
    energy_j: float


@dataclass(frozen=True)
class GlidePath:
    states: tuple
    cycles: int
    total_range_m: float
    morph_energy_j: float
    events: tuple = ()
    buoyancy_energy_j: float = 0.0
    cycle_ranges_m: tuple = field(default=())

    def __post_init__(self):
        x = [s.horizontal_m for s in self.states]
        if any(b < a for a, b in zip(x, x[1:])):
            raise ContractError("horizontal position must be non-decreasing along a path")
        if x and not math.isclose(self.total_range_m, x[-1] - x[0], rel_tol=1e-9, abs_tol=1e-9):
            raise ContractError("total range must equal the final minus the initial horizontal position")

    @property
    def duration_s(self):
        return self.states[-1].t_s - self.states[0].t_s if self.states else 0.0

    @property
    def morph_energy_fraction(self):
        """Morph energy as a fraction of the buoyancy-engine energy (nan without a budget)."""
        if not self.buoyancy_energy_j > 0:
            return math.nan
        return self.morph_energy_j / self.buoyancy_energy_j


def glide_angle(eta):
    """Steady glide path angle (deg below the horizontal), atan(1 / eta)."""
    eta = float(eta)
    if not eta > 0:
        raise NoSteadyGlideError(f"no steady glide for lift-to-drag ratio {eta:g} <= 0")
    return math.degrees(math.atan2(1.0, eta))


def range_per_cycle(eta, depth_amplitude_m):
    """Horizontal distance of one descend-and-climb cycle, 2 h eta."""
    glide_angle(eta)  # precondition check
    if not depth_amplitude_m > 0:
        raise ContractError("depth amplitude must be positive")
    return 2.0 * float(depth_amplitude_m) * float(eta)


def _curve_table(curve):
    if isinstance(curve, EfficiencyCurve):
        return {float(curve.inflation_mL): curve}
    table = {float(k): v for k, v in dict(curve).items()}
    if not table:
        raise ContractError("no efficiency curves given")
    return table


def _normalise_schedule(schedule, n_cycles, table):
    events = sorted((int(c), float(v)) for c, v in (schedule or ()))
    cycles = [c for c, _ in events]
    if len(set(cycles)) != len(cycles):
        raise ScheduleError("more than one morph scheduled for the same cycle")
    for c, v in events:
        if not 0 <= c < n_cycles:
            raise ScheduleError(f"morph at cycle {c} is outside 0..{n_cycles - 1}")
        if v not in table:
            known = ", ".join(f"{k:g}" for k in sorted(table))
            raise ScheduleError(f"no efficiency curve for {v:g} mL (available: {known})")
    return events


def simulate_sawtooth(
    config,
    curve,
    depth_amplitude_m,
    n_cycles,
    morph_schedule=(),
    *,
    initial_inflation_mL=None,
    alpha_range=(-math.inf, math.inf),
    samples_per_leg=1,
    pressure_fit=None,
    buoyancy_energy_j_per_cycle=0.0,
    u_mps=None,
):
    """Piecewise-linear sawtooth between the surface and ``depth_amplitude_m``.

    ``curve`` is one :class:`EfficiencyCurve` or a mapping from inflation (mL)
    to curves. Each cycle is flown at the best efficiency of the operative
    curve within ``alpha_range``. ``morph_schedule`` lists ``(cycle,
    inflation_mL)`` morphs applied at the start of that cycle; each costs
    P |dV| with P the chamber pressure of the larger of the two inflations.
    ``config`` is only used for labelling; speed comes from ``u_mps`` or the
    curve.
    """
    if int(n_cycles) != n_cycles or n_cycles < 1:
        raise ContractError("n_cycles must be a positive integer")
    if not depth_amplitude_m > 0:
        raise ContractError("depth amplitude must be positive")
    if samples_per_leg < 1:
        raise ContractError("samples_per_leg must be at least 1")
    if buoyancy_energy_j_per_cycle < 0:
        raise ContractError("buoyancy energy must be non-negative")
    n_cycles = int(n_cycles)
    table = _curve_table(curve)
    events = dict(_normalise_schedule(morph_schedule, n_cycles, table))
    current = float(min(table, key=abs) if initial_inflation_mL is None else initial_inflation_mL)
    if current not in table:
        raise ScheduleError(f"no efficiency curve for the initial inflation {current:g} mL")
    fit = pressure_fit or default_pressure_fit()

    states, ledger, ranges = [], [], []
    t = x = 0.0
    h = float(depth_amplitude_m)
    for cycle in range(n_cycles):
        target = events.get(cycle, current)
        if target != current:
            dv_mL = abs(target - current)
            p_pa = 1e3 * pressure_for_inflation(fit, max(abs(target), abs(current)))
            ledger.append(MorphEvent(cycle, current, target, p_pa, actuation_energy(p_pa, dv_mL * 1e-6)))
            current = target
        c = table[current]
        eta = c.best(*alpha_range)[1]
        theta = glide_angle(eta)
        speed = float(u_mps if u_mps is not None else c.u_mps)
        if not speed > 0:
            raise ContractError("glide speed unknown: pass u_mps or use curves that carry it")
        leg_x = h * eta
        leg_t = math.hypot(h, leg_x) / speed
        for phase, z0, z1 in (("descending", 0.0, h), ("ascending", h, 0.0)):
            for f in np.linspace(0.0, 1.0, samples_per_leg + 1):
                states.append(
                    GlideState(t + f * leg_t, x + f * leg_x, z0 + f * (z1 - z0), speed, theta, phase, current)
                )
            t += leg_t
            x += leg_x
        ranges.append(2.0 * leg_x)

    energy = math.fsum(e.energy_j for e in ledger)
    states = tuple(states)
    return GlidePath(
        states,
        n_cycles,
        states[-1].horizontal_m - states[0].horizontal_m,
        energy,
        tuple(ledger),
        buoyancy_energy_j_per_cycle * n_cycles,
        tuple(ranges),
    )


def _summary(curve, depth_m):
    alpha, eta = curve.best()
    out = {"best_alpha_deg": alpha, "max_eta": eta, "inflation_mL": float(curve.inflation_mL)}
    if eta > 0:
        out["glide_angle_deg"] = glide_angle(eta)
        out["range_per_cycle_m"] = range_per_cycle(eta, depth_m)
    else:
        out["glide_angle_deg"] = None
        out["range_per_cycle_m"] = None
    return out


def compare_configs(curve_rigid, curve_morph, depth_amplitude_m=1000.0):
    """Best-efficiency comparison of two curves on the same incidence grid.

    The gain is 100 (max eta_morph - max eta_rigid) / max eta_rigid; the range
    gain at equal depth amplitude is the same number because range is linear
    in eta.
    """
    a_r, a_m = curve_rigid.alpha_deg, curve_morph.alpha_deg
    if a_r.shape != a_m.shape or not np.array_equal(a_r, a_m):
        raise ContractError("efficiency curves are on different incidence grids")
    rigid = _summary(curve_rigid, depth_amplitude_m)
    morph = _summary(curve_morph, depth_amplitude_m)
    if not rigid["max_eta"] > 0:
        raise NoSteadyGlideError("reference configuration has no positive efficiency")
    gain = 100.0 * (morph["max_eta"] - rigid["max_eta"]) / rigid["max_eta"]
    range_gain = None
    if morph["range_per_cycle_m"] is not None:
        range_gain = 100.0 * (morph["range_per_cycle_m"] - rigid["range_per_cycle_m"]) / rigid["range_per_cycle_m"]
    return {
        "rigid": rigid,
        "morph": morph,
        "eta_gain_pct": gain,
        "range_gain_pct": range_gain,
        "depth_amplitude_m": float(depth_amplitude_m),
        "u_mps": float(curve_morph.u_mps),
    }


def format_report(report):
    """Plain-text rendering of :func:`compare_configs` output."""

    def fmt(v, spec):
        return "n/a" if v is None else format(v, spec)

    lines = [f"depth amplitude {report['depth_amplitude_m']:g} m, speed {report['u_mps']:g} m/s"]
    for key in ("rigid", "morph"):
        s = report[key]
        lines.append(
            f"{key:>5}: {s['inflation_mL']:g} mL, max L/D {s['max_eta']:.3f} at {s['best_alpha_deg']:g} deg, "
            f"glide angle {fmt(s['glide_angle_deg'], '.2f')} deg, range/cycle {fmt(s['range_per_cycle_m'], '.1f')} m"
        )
    lines.append(f"efficiency gain {report['eta_gain_pct']:+.2f} %, range gain {fmt(report['range_gain_pct'], '+.2f')} %")
    return "\n".join(lines) + "\n"


def write_path_csv(path, glide_path, meta=None):
    rows = [(s.t_s, s.horizontal_m, s.depth_m, s.phase, s.inflation_mL) for s in glide_path.states]
    info = {
        "cycles": str(glide_path.cycles),
        "total_range_m": repr(float(glide_path.total_range_m)),
        "morph_energy_j": repr(float(glide_path.morph_energy_j)),
    }
    info.update(meta or {})
    return write_table(path, PATH_COLUMNS, rows, info)


def write_report_json(path, report, meta=None):
    return write_json(path, {"meta": dict(meta or {}), **report})
