"""Sectional polars: sweeps over incidence for a set of (inflation, profile) pairs."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ContractError, ExtrapolationError, MorphGlideError, SweepError
from ..tabular import read_table, write_json, write_table
from .drag import DragModel, design_lift, drag_estimate
from .flow import reynolds
from .panel import DEFAULT_PANELS, panel_solve

__all__ = [
    "HydroPolar",
    "polar_sweep",
    "polar_filename",
    "write_polar_csv",
    "read_polar_csv",
    "write_polar_json",
    "POLAR_COLUMNS",
]

POLAR_COLUMNS = ("alpha_deg", "c_l", "c_d", "c_m")


@dataclass(frozen=True)
class HydroPolar:
    """Rows of (alpha_deg, c_l, c_d, c_m about the quarter chord) at one Reynolds number."""

    re: float
    inflation_mL: float
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in r) for r in self.rows)
        if not rows:
            raise ContractError("a polar needs at least one row")
        if any(len(r) != 4 for r in rows):
            raise ContractError("polar rows are (alpha_deg, c_l, c_d, c_m)")
        alphas = [r[0] for r in rows]
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ContractError("polar rows must be sorted by alpha without duplicates")
        if any(not r[2] > 0 for r in rows):
            raise ContractError("polar drag coefficients must be positive")
        object.__setattr__(self, "rows", rows)

    @property
    def table(self):
        return np.array(self.rows)

    @property
    def alpha_deg(self):
        return self.table[:, 0]

    @property
    def c_l(self):
        return self.table[:, 1]

    @property
    def c_d(self):
        return self.table[:, 2]

    @property
    def c_m(self):
        return self.table[:, 3]

    def at(self, alpha_deg):
        """Linearly interpolated (c_l, c_d, c_m); no extrapolation."""
        a = self.alpha_deg
        if not a[0] - 1e-12 <= alpha_deg <= a[-1] + 1e-12:
            raise ExtrapolationError(f"alpha = {alpha_deg:g} deg outside the polar range [{a[0]:g}, {a[-1]:g}]")
        t = self.table
        return tuple(float(np.interp(alpha_deg, a, t[:, k])) for k in (1, 2, 3))

    def lift_slope(self):
        """Least-squares (slope per degree, intercept) of c_l against alpha."""
        slope, intercept = np.polyfit(self.alpha_deg, self.c_l, 1)
        return float(slope), float(intercept)

    def zero_lift_alpha(self):
        """Zero-lift incidence of the least-squares line through the polar (may lie outside its range)."""
        if len(self.rows) < 2:
            raise ContractError("need at least two rows for a zero-lift angle")
        slope, intercept = self.lift_slope()
        return -intercept / slope

    def mirrored(self):
        """Polar of the y-mirrored section (inflation in the opposite direction)."""
        rows = sorted((-a, -cl, cd, -cm) for a, cl, cd, cm in self.rows)
        return HydroPolar(self.re, -self.inflation_mL, tuple(rows))


def _cell(profile, alpha, flow, drag_model, n_panels, c_l_design):
    sol = panel_solve(profile, alpha, flow, n_panels=n_panels)
    cd = drag_estimate(profile, alpha, flow, sol.c_l, drag_model, c_l_design=c_l_design)
    return (float(alpha), sol.c_l, cd, sol.c_m)


def polar_sweep(profiles, alphas, flow, drag_model=None, max_workers=1, n_panels=DEFAULT_PANELS):
    """One polar per (inflation_mL, profile) pair over ``alphas``.

    Incidence is measured from the undeformed chord (the x axis of every
    profile). Cells are independent and run on up to ``max_workers`` threads;
    aggregation is by sorted incidence so the output does not depend on the
    scheduling. If any cell fails, :class:`SweepError` is raised with the
    completed polars in ``results`` and ``(inflation_mL, alpha_deg, message)``
    in ``failures``.
    """
    alphas = sorted(float(a) for a in alphas)
    profiles = list(profiles)
    if not alphas:
        raise ContractError("alpha grid is empty")
    if not profiles:
        raise ContractError("no profiles to sweep")
    if len(set(alphas)) != len(alphas):
        raise ContractError("alpha grid has duplicates")
    drag_model = drag_model or DragModel()
    re = reynolds(flow)
    jobs = [(k, a) for k in range(len(profiles)) for a in alphas]
    design = {}

    def run(job):
        k, a = job
        try:
            if k not in design:
                design[k] = design_lift(profiles[k][1])
            return job, _cell(profiles[k][1], a, flow, drag_model, n_panels, design[k]), None
        except (MorphGlideError, np.linalg.LinAlgError, ValueError) as exc:
            return job, None, f"{type(exc).__name__}: {exc}"

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(j) for j in jobs]

    cells, failures = {}, []
    for (k, a), row, err in outcomes:
        if err is None:
            cells[(k, a)] = row
        else:
            failures.append((float(profiles[k][0]), a, err))
    polars = []
    failed = {f[0] for f in failures}
    for k, (infl, _) in enumerate(profiles):
        if float(infl) in failed:
            continue
        polars.append(HydroPolar(re, float(infl), tuple(cells[(k, a)] for a in alphas)))
    if failures:
        lines = "; ".join(f"{i:g} mL @ {a:g} deg: {m}" for i, a, m in failures)
        raise SweepError(f"{len(failures)} polar cell(s) failed: {lines}", results=polars, failures=failures)
    return polars


def polar_filename(polar, ext="csv"):
    return f"polar_Re{polar.re:.0f}_infl{polar.inflation_mL:g}.{ext}"


def write_polar_csv(path, polar, meta=None):
    info = {"re": repr(float(polar.re)), "inflation_mL": repr(float(polar.inflation_mL))}
    info.update(meta or {})
    return write_table(path, POLAR_COLUMNS, polar.rows, info)


def read_polar_csv(path):
    rows, meta = read_table(path, POLAR_COLUMNS)
    return HydroPolar(float(meta.get("re", "nan")), float(meta.get("inflation_mL", 0.0)), tuple(map(tuple, rows)))


def write_polar_json(path, polar, meta=None):
    payload = {
        "meta": dict(meta or {}),
        "re": float(polar.re),
        "inflation_mL": float(polar.inflation_mL),
        "columns": list(POLAR_COLUMNS),
        "rows": [list(r) for r in polar.rows],
    }
    return write_json(path, payload)
