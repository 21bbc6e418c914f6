import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from morphglide.errors import ContractError, NoSteadyGlideError, ScheduleError
from morphglide.glide import (
    GlidePath,
    GlideState,
    compare_configs,
    format_report,
    glide_angle,
    range_per_cycle,
    simulate_sawtooth,
    write_path_csv,
)
from morphglide.structural import default_pressure_fit, pressure_for_inflation
from morphglide.tabular import read_table
from morphglide.vehicle import EfficiencyCurve, actuation_energy

GRID = tuple(float(a) for a in range(0, 9))


def curve(peak, inflation=0.0, u=0.26, at=8.0):
    """Triangular efficiency curve with maximum ``peak`` at incidence ``at``."""
    rows = tuple((a, peak * (1.0 - abs(a - at) / 20.0)) for a in GRID)
    return EfficiencyCurve(rows, inflation, u)


# -- glide angle and range ------------------------------------------------------

def test_glide_angle_examples():
    assert glide_angle(1.0) == pytest.approx(45.0)
    assert glide_angle(6.36) == pytest.approx(8.94, abs=5e-3)
    assert glide_angle(6.98) == pytest.approx(8.15, abs=5e-3)
    for bad in (0.0, -1.0):
        with pytest.raises(NoSteadyGlideError):
            glide_angle(bad)


@given(st.floats(0.01, 100.0), st.floats(1.0, 100.0))
def test_glide_angle_properties(eta, factor):
    assert glide_angle(eta) + glide_angle(1.0 / eta) == pytest.approx(90.0)
    assert glide_angle(eta * (1 + factor / 100)) < glide_angle(eta)


def test_range_examples():
    assert range_per_cycle(1.0, 1000.0) == pytest.approx(2000.0)
    assert range_per_cycle(6.36, 1000.0) == pytest.approx(12720.0)
    with pytest.raises(ContractError):
        range_per_cycle(2.0, 0.0)
    with pytest.raises(NoSteadyGlideError):
        range_per_cycle(-1.0, 100.0)


@given(st.floats(0.1, 50.0), st.floats(0.1, 50.0), st.floats(1.0, 5000.0))
def test_range_linear(e1, e2, h):
    assert range_per_cycle(e2, h) / range_per_cycle(e1, h) == pytest.approx(e2 / e1, rel=1e-12)
    assert range_per_cycle(e1, 2 * h) == pytest.approx(2 * range_per_cycle(e1, h), rel=1e-12)


# -- types ------------------------------------------------------------------------

def test_state_invariants():
    with pytest.raises(ContractError):
        GlideState(0.0, 0.0, 0.0, 0.3, 0.0, "descending")
    with pytest.raises(ContractError):
        GlideState(0.0, 0.0, -1.0, 0.3, 10.0, "descending")
    with pytest.raises(ContractError):
        GlideState(0.0, 0.0, 1.0, 0.3, 10.0, "sideways")


def test_path_invariants():
    a = GlideState(0.0, 10.0, 0.0, 0.3, 10.0, "descending")
    b = GlideState(1.0, 5.0, 1.0, 0.3, 10.0, "descending")
    with pytest.raises(ContractError):
        GlidePath((a, b), 1, -5.0, 0.0)
    with pytest.raises(ContractError):
        GlidePath((b, a), 1, 2.0, 0.0)


# -- sawtooth -------------------------------------------------------------------

@given(st.floats(1.0, 12.0), st.integers(1, 20), st.integers(1, 5))
def test_constant_efficiency_additive(peak, n, samples):
    c = curve(peak)
    path = simulate_sawtooth(None, c, 500.0, n, samples_per_leg=samples)
    assert path.total_range_m == pytest.approx(n * range_per_cycle(peak, 500.0), rel=1e-9)
    assert path.morph_energy_j == 0.0
    depth = np.array([s.depth_m for s in path.states])
    assert depth.min() >= 0 and depth.max() == pytest.approx(500.0)


def test_efficiency_gain_propagates_exactly():
    a = simulate_sawtooth(None, curve(6.36), 1000.0, 7)
    b = simulate_sawtooth(None, curve(6.36 * 1.0975), 1000.0, 7)
    assert b.total_range_m / a.total_range_m == pytest.approx(1.0975, rel=1e-12)


def test_path_kinematics():
    path = simulate_sawtooth(None, curve(5.0), 100.0, 2, samples_per_leg=4)
    theta = math.degrees(math.atan(1 / 5.0))
    assert all(s.glide_angle_deg == pytest.approx(theta) for s in path.states)
    leg = math.hypot(100.0, 500.0) / 0.26
    assert path.duration_s == pytest.approx(4 * leg)
    phases = [s.phase for s in path.states]
    assert phases[0] == "descending" and phases[-1] == "ascending"


def test_morph_schedule_energy_ledger():
    table = {0.0: curve(5.5, 0.0), 15.0: curve(5.65, 15.0), 30.0: curve(5.7, 30.0)}
    schedule = [(0, 15.0), (3, 30.0), (5, 0.0)]
    path = simulate_sawtooth(None, table, 800.0, 6, schedule, initial_inflation_mL=0.0)
    fit = default_pressure_fit()
    expected = (
        actuation_energy(1e3 * pressure_for_inflation(fit, 15.0), 15e-6)
        + actuation_energy(1e3 * pressure_for_inflation(fit, 30.0), 15e-6)
        + actuation_energy(1e3 * pressure_for_inflation(fit, 30.0), 30e-6)
    )
    assert path.morph_energy_j == pytest.approx(expected, rel=1e-12)
    assert [e.cycle for e in path.events] == [0, 3, 5]
    fine = simulate_sawtooth(None, table, 800.0, 6, schedule, initial_inflation_mL=0.0, samples_per_leg=9)
    assert fine.morph_energy_j == path.morph_energy_j
    assert sum(path.cycle_ranges_m) == pytest.approx(path.total_range_m)


def test_morph_energy_fraction():
    table = {0.0: curve(5.5), 120.0: curve(4.0, 120.0)}
    path = simulate_sawtooth(None, table, 800.0, 2, [(1, 120.0)], buoyancy_energy_j_per_cycle=500.0)
    assert path.morph_energy_fraction == pytest.approx(path.morph_energy_j / 1000.0)
    assert math.isnan(simulate_sawtooth(None, table, 800.0, 1).morph_energy_fraction)


def test_schedule_errors():
    table = {0.0: curve(5.5)}
    with pytest.raises(ScheduleError):
        simulate_sawtooth(None, table, 100.0, 3, [(1, 15.0)])
    with pytest.raises(ScheduleError):
        simulate_sawtooth(None, table, 100.0, 3, [(3, 0.0)])
    with pytest.raises(ScheduleError):
        simulate_sawtooth(None, {0.0: curve(5.5), 15.0: curve(6.0)}, 100.0, 3, [(1, 15.0), (1, 0.0)])
    with pytest.raises(ContractError):
        simulate_sawtooth(None, table, 100.0, 0)


def test_alpha_window_limits_best():
    c = curve(6.0, at=8.0)
    narrow = simulate_sawtooth(None, c, 100.0, 1, alpha_range=(0.0, 4.0))
    assert narrow.total_range_m == pytest.approx(2 * 100.0 * 6.0 * (1 - 4 / 20))


def test_path_csv(tmp_path):
    path = simulate_sawtooth(None, curve(5.0), 100.0, 2, samples_per_leg=2)
    out = tmp_path / "path.csv"
    write_path_csv(out, path, {"config_hash": "h"})
    rows, meta = read_table(out, ("t_s", "x_m", "depth_m", "phase", "inflation_mL"), text_columns=("phase",))
    assert len(rows) == len(path.states)
    assert meta["config_hash"] == "h"


# -- comparison -----------------------------------------------------------------

def test_compare_published_values():
    rep = compare_configs(curve(6.36), curve(6.98, 15.0, at=6.0))
    assert rep["eta_gain_pct"] == pytest.approx(9.75, abs=0.05)
    assert rep["range_gain_pct"] == pytest.approx(rep["eta_gain_pct"], rel=1e-12)
    assert rep["morph"]["best_alpha_deg"] == 6.0 and rep["rigid"]["best_alpha_deg"] == 8.0
    assert rep["rigid"]["glide_angle_deg"] == pytest.approx(8.94, abs=5e-3)
    assert "+9.75 %" in format_report(rep)


def test_compare_identical_and_scaled():
    c = curve(5.0)
    assert compare_configs(c, c)["eta_gain_pct"] == 0.0
    morph = curve(5.5)
    rep = compare_configs(morph.scaled(1 / 1.1), morph)
    assert rep["eta_gain_pct"] == pytest.approx(10.0, rel=1e-12)


@given(st.floats(0.1, 10.0))
def test_compare_scale_invariant(k):
    a, b = curve(5.0), curve(5.6, at=6.0)
    base = compare_configs(a, b)["eta_gain_pct"]
    assert compare_configs(a.scaled(k), b.scaled(k))["eta_gain_pct"] == pytest.approx(base, rel=1e-9)


def test_compare_grid_mismatch():
    other = EfficiencyCurve(tuple((a + 0.5, 1.0) for a in GRID))
    with pytest.raises(ContractError):
        compare_configs(curve(5.0), other)
