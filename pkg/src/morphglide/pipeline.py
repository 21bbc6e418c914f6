"""End-to-end chain used by the command line and the demos.

deform (structural solve per inflation) -> polars per speed -> vehicle
efficiency/moment tables -> glide comparison. Results are memoised per run and
deformed profiles are cached on disk, keyed by the structural settings hash.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .errors import ContractError
from .geometry import AirfoilProfile, extract_camber, profile_rms_error, read_camber_csv, read_profile_csv
from .hydro.polar import polar_sweep
from .structural.fem import FEModel
from .structural.mesh import wing_section_mesh
from .structural.pressure import default_pressure_fit, pressure_for_inflation
from .structural.solver import SolverSettings, deformed_profile, solve_inflation, trailing_edge_deflection
from .tabular import read_table
from .vehicle import EfficiencyCurve, efficiency_curve, force_table, roll_moment

log = logging.getLogger(__name__)

__all__ = ["DeformResult", "Pipeline", "deform_series", "experimental_camber_path", "window"]


@dataclass(frozen=True)
class DeformResult:
    inflation_mL: float
    pressure_kpa: float
    profile: AirfoilProfile
    te_deflection_m: float
    newton_iterations: int
    residual_norm: float
    cached: bool = False


def deform_series(mesh, inflations, fit=None, materials=None, settings=None):
    """Solve the inflations in ascending order, each starting from the previous equilibrium.

    Continuation makes the whole set several times cheaper than independent
    solves from the unloaded state; the equilibria agree to solver tolerance.
    """
    fit = fit or default_pressure_fit()
    settings = settings or SolverSettings()
    model = FEModel(mesh, materials)
    out = {}
    state = None
    for infl in sorted(float(v) for v in inflations):
        p_kpa = pressure_for_inflation(fit, infl)
        if state is not None and 0 < state.applied_pressure_pa < 1e3 * p_kpa:
            state = solve_inflation(mesh, 1e3 * p_kpa, max(2, settings.n_load_steps // 2), model=model,
                                    settings=settings, initial=state)
        else:
            state = solve_inflation(mesh, 1e3 * p_kpa, model=model, settings=settings)
        label = f"deformed-{infl:g}mL"
        out[infl] = DeformResult(
            infl,
            p_kpa,
            deformed_profile(mesh, state, name=label),
            trailing_edge_deflection(mesh, state),
            state.newton_iterations,
            state.residual_norm,
        )
    return out


def experimental_camber_path(directory, inflation_mL):
    return Path(directory) / f"camber_{inflation_mL:g}mL.csv"


def window(curve, alpha_min, alpha_max):
    """The rows of an efficiency curve inside [alpha_min, alpha_max]."""
    rows = tuple(r for r in curve.rows if alpha_min <= r[0] <= alpha_max)
    if not rows:
        raise ContractError(f"no efficiency rows within [{alpha_min:g}, {alpha_max:g}] deg")
    return EfficiencyCurve(rows, curve.inflation_mL, curve.u_mps)


class Pipeline:
    """Memoising driver over one :class:`~morphglide.config.RunConfig`."""

    def __init__(self, config, cache_dir=None):
        self.config = config
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self._deform = {}
        self._polars = {}
        self._mesh = None

    @property
    def meta(self):
        return {"config_hash": self.config.hash, "version": __version__}

    @property
    def mesh(self):
        if self._mesh is None:
            self._mesh = wing_section_mesh(self.config.mesh_spec())
        return self._mesh

    def _cache_file(self, inflation_mL):
        return self.cache_dir / f"profile_infl{inflation_mL:g}.csv"

    def _from_cache(self, inflation_mL):
        if self.cache_dir is None or not self._cache_file(inflation_mL).exists():
            return None
        path = self._cache_file(inflation_mL)
        try:
            profile = read_profile_csv(path, name=f"deformed-{inflation_mL:g}mL")
        except (ValueError, OSError):
            return None
        _, meta = read_table(path, ("x_m", "y_m"))
        if meta.get("structural_hash") != self.config.structural_hash:
            return None
        return DeformResult(
            inflation_mL,
            float(meta["pressure_kpa"]),
            profile,
            float(meta["te_deflection_m"]),
            int(meta["newton_iterations"]),
            float(meta["residual_norm"]),
            cached=True,
        )

    def deform(self, inflations):
        """DeformResult per inflation (mL), solving only what is neither memoised nor cached."""
        wanted = sorted({float(v) for v in inflations})
        for infl in wanted:
            if infl not in self._deform:
                hit = self._from_cache(infl)
                if hit is not None:
                    self._deform[infl] = hit
        todo = [v for v in wanted if v not in self._deform]
        if todo:
            log.info("solving inflation(s) %s mL", ", ".join(f"{v:g}" for v in todo))
            self._deform.update(
                deform_series(self.mesh, todo, materials=self.config.materials_map(),
                              settings=self.config.solver_settings())
            )
        return {v: self._deform[v] for v in wanted}

    def experimental_rms(self, result, directory):
        """(rms_m, max_m, path) of the camber line against digitized data, or None if absent."""
        path = experimental_camber_path(directory, result.inflation_mL)
        if not path.exists():
            return None
        measured = read_camber_csv(path, chord_m=result.profile.chord_m, inflation_mL=result.inflation_mL)
        simulated = extract_camber(result.profile, n_stations=len(measured.stations), inflation_mL=result.inflation_mL)
        rms, worst = profile_rms_error(simulated, measured)
        return rms, worst, path

    def polars(self, u_mps):
        key = float(u_mps)
        if key not in self._polars:
            sw = self.config.sweep
            profiles = [(v, r.profile) for v, r in self.deform(sw["inflations_mL"]).items()]
            self._polars[key] = polar_sweep(
                profiles,
                sw["alphas_deg"],
                self.config.flow(u_mps),
                self.config.drag_model(),
                max_workers=int(sw["max_workers"]),
                n_panels=int(sw["n_panels"]),
            )
        return self._polars[key]

    def polar(self, u_mps, inflation_mL):
        for p in self.polars(u_mps):
            if p.inflation_mL == float(inflation_mL):
                return p
        raise ContractError(f"no polar for {inflation_mL:g} mL")

    def forces(self, u_mps, inflation_mL):
        return force_table(self.config.vehicle_config(), self.polar(u_mps, inflation_mL), self.config.sweep["alphas_deg"],
                           self.config.flow(u_mps), self.config.drag_model())

    def curve(self, u_mps, inflation_mL):
        return efficiency_curve(self.config.vehicle_config(), self.polar(u_mps, inflation_mL),
                                self.config.sweep["alphas_deg"], self.config.flow(u_mps), self.config.drag_model())

    def roll(self, u_mps):
        """(inflation_mL, roll moment N m) for each +X / -X differential pair."""
        alpha = float(self.config.sweep["roll_alpha_deg"])
        out = []
        for p in self.polars(u_mps):
            if p.inflation_mL > 0:
                out.append((p.inflation_mL, roll_moment(self.config.vehicle_config(), p.mirrored(), p,
                                                        self.config.flow(u_mps), alpha)))
        return out

