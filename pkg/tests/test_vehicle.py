import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ALPHAS, INFLATIONS_ML
from morphglide.errors import ContractError, ExtrapolationError
from morphglide.geometry import naca4_profile
from morphglide.hydro import FlowConditions, HydroPolar, polar_sweep
from morphglide.vehicle import (
    REFERENCE_UUV,
    EfficiencyCurve,
    VehicleConfig,
    VehicleForces,
    actuation_energy,
    efficiency,
    efficiency_curve,
    force_table,
    read_efficiency_csv,
    roll_moment,
    scale_to_reynolds,
    static_stability,
    vehicle_forces,
    write_efficiency_csv,
    write_moment_csv,
    zero_lift_alpha,
)


@pytest.fixture(scope="module")
def curves(vehicle, design_polars, design_flow):
    return {v: efficiency_curve(vehicle, p, ALPHAS, design_flow) for v, p in design_polars.items()}


@pytest.fixture(scope="module")
def tables(vehicle, design_polars, design_flow):
    return {v: force_table(vehicle, p, ALPHAS, design_flow) for v, p in design_polars.items()}


# -- scaling ------------------------------------------------------------------

def test_scale_to_reynolds_chord():
    base = VehicleConfig(1.0, 0.14, wing_chord_m=0.213)
    scaled = scale_to_reynolds(base, 1.06e5, 0.26)
    # 1.06e5 x 1e-6 / 0.26 = 0.4077 m, printed as 0.409 m
    assert scaled.wing_chord_m == pytest.approx(0.409, rel=5e-3)
    assert scaled.wing_chord_m == pytest.approx(1.06e5 * 1e-6 / 0.26, rel=1e-12)


def test_scale_identity():
    base = REFERENCE_UUV
    same = scale_to_reynolds(base, base.wing_chord_m * 0.26 / 1e-6, 0.26)
    for f in ("fuselage_length_m", "fuselage_diameter_m", "wing_span_m", "wing_chord_m", "wing_x_m"):
        assert getattr(same, f) == pytest.approx(getattr(base, f), rel=1e-12)


@given(st.floats(0.2, 5.0))
def test_scale_is_similarity(s):
    base = REFERENCE_UUV
    scaled = scale_to_reynolds(base, s * base.wing_chord_m * 0.5 / 1e-6, 0.5)
    assert scaled.reference_area_m2 == pytest.approx(s * s * base.reference_area_m2, rel=1e-12)
    assert scaled.cg == pytest.approx(s * base.cg, rel=1e-9)


def test_config_contracts():
    with pytest.raises(ContractError):
        VehicleConfig(1.0, 0.1, wing_x_m=1.5)
    with pytest.raises(ContractError):
        VehicleConfig(-1.0, 0.1)
    with pytest.raises(ContractError):
        VehicleConfig(1.0, 0.1, density_model="explicit")
    with pytest.raises(ContractError):
        scale_to_reynolds(REFERENCE_UUV, 0.0, 0.3)
    assert REFERENCE_UUV.wing_incidence_deg == 0.0


# -- forces ---------------------------------------------------------------------

def test_rigid_zero_incidence_has_no_lift(vehicle, design_polars, design_flow):
    f = vehicle_forces(vehicle, design_polars[0.0], 0.0, design_flow)
    assert abs(f.lift_n) < 1e-9
    assert abs(f.pitch_moment_nm) < 1e-9


def test_rigid_curves_have_parity(tables):
    rigid = tables[0.0]
    lift = np.array([f.lift_n for f in rigid])
    drag = np.array([f.drag_n for f in rigid])
    pitch = np.array([f.pitch_moment_nm for f in rigid])
    np.testing.assert_allclose(lift, -lift[::-1], atol=1e-6)
    np.testing.assert_allclose(pitch, -pitch[::-1], atol=1e-6)
    np.testing.assert_allclose(drag, drag[::-1], atol=1e-6)


def test_rigid_lift_is_linear(tables):
    rigid = tables[0.0]
    a = np.array([f.alpha_deg for f in rigid])
    c_l = np.array([f.c_l for f in rigid])
    fit = np.polyval(np.polyfit(a, c_l, 1), a)
    assert np.abs(fit - c_l).max() < 0.02 * np.abs(c_l).max()


def test_lift_slope_reduced_by_finite_span(vehicle, design_polars, design_flow):
    polar = design_polars[0.0]
    section = polar.lift_slope()[0]
    wing = []
    for a in (-2.0, 2.0):
        f = vehicle_forces(vehicle, polar, a, design_flow)
        wing.append(f.c_l)
    # hull lift is included in the vehicle value; compare the wing part alone
    ar = vehicle.aspect_ratio
    assert section * ar / (ar + 2) < section
    hull_part = vehicle.frontal_area_m2 * vehicle.hull_lift_slope * math.radians(1.0) / vehicle.reference_area_m2
    assert (wing[1] - wing[0]) / 4.0 - hull_part < section


def test_reference_vehicle_drag_band():
    flow = FlowConditions(0.50, length_m=REFERENCE_UUV.wing_chord_m)
    section = naca4_profile("0009", chord_m=REFERENCE_UUV.wing_chord_m)
    polar = polar_sweep([(0.0, section)], (-2.0, 0.0, 2.0), flow)[0]
    c_d = vehicle_forces(REFERENCE_UUV, polar, 0.0, flow).c_d
    assert 0.02 <= c_d <= 0.06
    assert c_d == pytest.approx(0.035, abs=0.002)


def test_out_of_range_incidence(vehicle, design_polars, design_flow):
    with pytest.raises(ExtrapolationError):
        vehicle_forces(vehicle, design_polars[0.0], 9.0, design_flow)


# -- efficiency ---------------------------------------------------------------

def test_efficiency_examples():
    assert efficiency(VehicleForces(2.0, 2.0, 0.0, 0.0, 0.0)) == 1.0
    assert efficiency(VehicleForces(0.0, 2.0, 0.0, 0.0, 0.0)) == 0.0
    with pytest.raises(ContractError):
        VehicleForces(1.0, 0.0, 0.0, 0.0, 0.0)


@given(st.floats(-100, 100), st.floats(0.01, 100), st.floats(0.01, 100))
def test_efficiency_scale_invariant(lift, drag, k):
    a = efficiency(VehicleForces(lift, drag, 0.0, 0.0, 0.0))
    b = efficiency(VehicleForces(k * lift, k * drag, 0.0, 0.0, 0.0))
    assert b == pytest.approx(a, rel=1e-12, abs=1e-12)


def test_rigid_efficiency_is_odd(curves):
    eta = curves[0.0].eta
    np.testing.assert_allclose(eta, -eta[::-1], atol=1e-6)
    assert curves[0.0].rows[8] == (0.0, pytest.approx(0.0, abs=1e-9))


def test_heavy_inflation_never_negative(curves):
    for v in (60.0, 90.0, 120.0):
        assert np.all(curves[v].eta > 0), v


def test_morph_beats_rigid_on_positive_incidence(curves):
    assert curves[15.0].best(0.0, 8.0)[1] > curves[0.0].best(0.0, 8.0)[1]


def test_rigid_peak_band_and_shift(curves):
    a_rigid, eta_rigid = curves[0.0].best()
    a_morph, _ = curves[15.0].best()
    assert 4.5 <= eta_rigid <= 8.5
    assert a_morph < a_rigid
    assert (a_rigid, a_morph) == (8.0, 6.0)


def test_efficiency_regression(curves):
    assert curves[0.0].best()[1] == pytest.approx(5.501, abs=2e-3)
    assert curves[15.0].best()[1] == pytest.approx(5.650, abs=2e-3)


def test_vehicle_zero_lift_shifts_with_inflation(tables):
    a0 = [zero_lift_alpha(tables[v]) for v in INFLATIONS_ML]
    assert abs(a0[0]) < 1e-9
    assert all(a < 0 for a in a0[1:])
    assert all(b < a for a, b in zip(a0, a0[1:]))


def test_efficiency_curve_contract():
    with pytest.raises(ContractError):
        EfficiencyCurve(((1.0, 2.0), (0.0, 1.0)))
    c = EfficiencyCurve(((0.0, 1.0), (2.0, 3.0), (4.0, 3.0)))
    assert c.best() == (2.0, 3.0)
    assert c.scaled(2.0).eta.tolist() == [2.0, 6.0, 6.0]


def test_efficiency_csv_round_trip(tmp_path, curves):
    path = tmp_path / "eta.csv"
    write_efficiency_csv(path, curves[30.0], {"config_hash": "x"})
    assert read_efficiency_csv(path) == curves[30.0]


# -- stability ------------------------------------------------------------------

def test_linear_positive_slope_is_stable_everywhere():
    curve = [(a, 0.5 * a) for a in range(-4, 5)]
    res = static_stability(curve)
    assert res.stable_range == ((-4.0, 4.0),)
    np.testing.assert_allclose(res.m_alpha, 0.5)
    np.testing.assert_allclose(res.m_alpha_classical, -0.5)


def test_constant_moment_has_no_stable_range():
    stable, m_alpha = static_stability([(a, 2.0) for a in range(5)])
    assert stable == ()
    assert np.all(m_alpha == 0)


def test_literal_slope_reported():
    res = static_stability([(a, float(a)) for a in range(-3, 4)])
    np.testing.assert_allclose(res.m_alpha_abs, np.gradient(np.abs(np.arange(-3.0, 4.0))))


def test_stability_contracts():
    with pytest.raises(ContractError):
        static_stability([(0, 1), (1, 2)])
    with pytest.raises(ContractError):
        static_stability([(0, 1), (2, 2), (1, 0)])


def test_rigid_uniform_density_not_stable(tables, vehicle):
    assert vehicle.density_model == "uniform"
    curve = [(f.alpha_deg, f.pitch_moment_nm) for f in tables[0.0]]
    assert static_stability(curve, nose_up_positive=True).stable_range == ()


def test_moment_table_has_both_conventions(tmp_path, tables):
    path = tmp_path / "m.csv"
    write_moment_csv(path, tables[0.0])
    header = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")][0]
    assert "m_alpha_abs" in header and "m_alpha_classical" in header


# -- roll and energy -------------------------------------------------------------

def test_roll_identical_polars(vehicle, design_polars, design_flow):
    p = design_polars[30.0]
    assert roll_moment(vehicle, p, p, design_flow) == 0.0


def test_roll_antisymmetry(vehicle, design_polars, design_flow):
    for v in (15.0, 60.0, 120.0):
        a, b = design_polars[v].mirrored(), design_polars[v]
        for alpha in (-3.0, 0.0, 5.0):
            assert roll_moment(vehicle, a, b, design_flow, alpha) == -roll_moment(vehicle, b, a, design_flow, alpha)


def test_roll_grows_with_differential(vehicle, design_polars, design_flow):
    p = [abs(roll_moment(vehicle, design_polars[v].mirrored(), design_polars[v], design_flow))
         for v in (30.0, 60.0, 90.0, 120.0)]
    assert all(b > a for a, b in zip(p, p[1:]))


def test_roll_needs_matching_reynolds(vehicle, design_polars, design_flow):
    other = HydroPolar(1.0, 0.0, design_polars[0.0].rows)
    with pytest.raises(ContractError):
        roll_moment(vehicle, other, design_polars[0.0], design_flow)


def test_actuation_energy_examples():
    assert actuation_energy(50e3, 120e-6) == pytest.approx(6.0, rel=1e-12)
    assert actuation_energy(18.8e3, 0.0) == 0.0
    assert actuation_energy(18.8e3, 30e-6) == pytest.approx(0.564, rel=1e-12)
    with pytest.raises(ContractError):
        actuation_energy(-1.0, 1e-6)


def test_stable_intervals_are_maximal_runs():
    # slope positive on [-4, -2] and [2, 4], negative between
    curve = [(a, float(abs(a) ** 2 * np.sign(a) if abs(a) >= 2 else -a)) for a in range(-4, 5)]
    res = static_stability(curve)
    assert all(lo <= hi for lo, hi in res.stable_range)
    stable = [a for a, m in zip(res.alpha_deg, res.m_alpha) if m > 0]
    covered = [a for lo, hi in res.stable_range for a in res.alpha_deg if lo <= a <= hi]
    assert covered == stable
