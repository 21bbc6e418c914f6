import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morphglide.errors import (
    GeometryError,
    ImplausibleMorphError,
    IncomparableProfilesError,
    InvalidDiscretizationError,
    ResolutionError,
)
from morphglide.geometry import (
    CamberLine,
    apply_camber,
    effective_aoa,
    extract_camber,
    mirror_profile,
    naca4_profile,
    parabolic_camber,
    profile_rms_error,
    read_camber_csv,
    read_profile_csv,
    write_camber_csv,
    write_profile_csv,
)


def test_naca0016_thickness():
    p = naca4_profile("0016", 200, 0.230)
    assert p.max_thickness() == pytest.approx(0.0368, rel=5e-3)


def test_naca0009_thickness():
    p = naca4_profile("0009", 200, 0.213)
    assert p.max_thickness() == pytest.approx(0.01917, rel=5e-3)


def test_symmetric_profile_mirrors_onto_itself():
    p = naca4_profile("0016", 200, 1.0)
    m = mirror_profile(p)
    assert np.max(np.abs(np.sort(m.points, axis=0) - np.sort(p.points, axis=0))) < 1e-9
    # pointwise: the upper and lower surfaces are reflections
    upper, lower = p.surfaces()
    assert np.allclose(upper[:, 0], lower[:, 0], atol=1e-12)
    assert np.allclose(upper[:, 1], -lower[:, 1], atol=1e-9)


def test_profile_is_closed_and_ccw():
    p = naca4_profile("2412", 120)
    assert np.linalg.norm(p.points[0] - p.points[-1]) < 1e-9
    x, y = p.x, p.y
    area = 0.5 * np.sum(x[:-1] * y[1:] - x[1:] * y[:-1])
    assert area > 0


@pytest.mark.parametrize("code", ["00a6", "016", "12345", "0000", "1016"])
def test_bad_naca_codes(code):
    with pytest.raises(ValueError):
        naca4_profile(code)


@pytest.mark.parametrize("n", [38, 41, 0])
def test_bad_point_counts(n):
    with pytest.raises(InvalidDiscretizationError):
        naca4_profile("0016", n)


@pytest.mark.parametrize("code", ["0006", "0012", "0016", "0024"])
def test_symmetric_sections_have_no_camber(code):
    cam = extract_camber(naca4_profile(code, 200))
    assert np.max(np.abs(cam.offsets)) < 1e-9


def test_zero_camber_is_identity():
    p = naca4_profile("0016", 200)
    out = apply_camber(p, CamberLine([[0.0, 0.0], [0.5, 0.0], [1.0, 0.0]]))
    assert np.max(np.abs(out.points - p.points)) < 1e-12
    assert out.chord_m == p.chord_m


def test_parabolic_camber_peak_location():
    h = 0.004
    cam = parabolic_camber(h, 41)
    p = apply_camber(naca4_profile("0016", 200), cam)
    got = extract_camber(p, 41)
    x_peak, peak = got.max_offset()
    assert abs(x_peak - 0.5) <= 0.5 * (1 - math.cos(math.pi / 40)) + 1e-12
    assert peak == pytest.approx(h, abs=1e-6)


def test_implausible_morph():
    with pytest.raises(ImplausibleMorphError):
        apply_camber(naca4_profile("0016", 100), parabolic_camber(0.6 * 0.230))


def test_camber_must_span_chord():
    with pytest.raises(GeometryError):
        apply_camber(naca4_profile("0016", 100), CamberLine([[0.0, 0.0], [0.8, 0.001]]))


def test_camber_line_leading_edge_fixed():
    with pytest.raises(GeometryError):
        CamberLine([[0.0, 0.001], [1.0, 0.0]])
    with pytest.raises(GeometryError):
        CamberLine([[0.0, 0.0], [0.5, 0.0], [0.4, 0.0]])


@settings(max_examples=30, deadline=None)
@given(
    h=st.floats(-0.012, 0.012),
    tip=st.floats(-0.02, 0.02),
)
def test_apply_extract_round_trip(h, tip):
    s = np.linspace(0, 1, 21)
    offsets = 4 * h * s * (1 - s) + tip * s**2
    cam = CamberLine(np.column_stack([s, offsets]))
    p = apply_camber(naca4_profile("0016", 240), cam)
    got = extract_camber(p, 41)
    assert np.max(np.abs(got.offsets - cam(got.x_over_c))) < 1e-6


def test_round_trip_of_a_solved_camber_line(morph_series):
    """The 30 mL structural camber line, applied to the baseline and extracted again."""
    solved = morph_series[0][30.0].profile
    cam = extract_camber(solved, 41, inflation_mL=30)
    p = apply_camber(naca4_profile("0016", 240), cam)
    back = extract_camber(p, 41)
    assert np.max(np.abs(back.offsets - cam.offsets)) < 1e-6


def test_thickness_preserved_by_moderate_camber():
    base = naca4_profile("0016", 240)
    p = apply_camber(base, parabolic_camber(0.005))
    assert p.max_thickness() == pytest.approx(base.max_thickness(), rel=0.01)


def test_extract_camber_resolution():
    with pytest.raises(ResolutionError):
        extract_camber(naca4_profile("0016", 40), 60)


def test_camber_translation_invariant():
    p = apply_camber(naca4_profile("0016", 200), parabolic_camber(0.003))
    a = extract_camber(p)
    b = extract_camber(p.translated(0.31, -0.07))
    assert np.allclose(a.offsets, b.offsets, atol=1e-12)


def test_effective_aoa_examples():
    assert effective_aoa(parabolic_camber(0.0), 4.0).alpha_wing_deg == pytest.approx(4.0)
    s = np.linspace(0, 1, 11)
    cam = CamberLine(np.column_stack([s, -0.01 * s]), chord_m=0.230)
    assert effective_aoa(cam, 0.0).alpha_wing_deg == pytest.approx(math.degrees(math.atan(0.01 / 0.230)))
    assert effective_aoa(cam, 0.0).alpha_wing_deg == pytest.approx(2.49, abs=5e-3)
    assert effective_aoa(cam, -2.49).alpha_wing_deg == pytest.approx(0.0, abs=5e-3)


@given(alpha=st.floats(-15, 15), shift=st.floats(-0.02, 0.02))
def test_effective_aoa_is_affine_with_unit_slope(alpha, shift):
    s = np.linspace(0, 1, 11)
    cam = CamberLine(np.column_stack([s, shift * s**2]))
    offset = effective_aoa(cam, 0.0).alpha_wing_deg
    assert effective_aoa(cam, alpha).alpha_wing_deg == pytest.approx(alpha + offset, abs=1e-9)


def test_rms_identical_and_offset():
    p = naca4_profile("0016", 200)
    assert profile_rms_error(p, p) == (0.0, 0.0)
    rms, mx = profile_rms_error(p, p.translated(0.0, 0.001))
    assert rms == pytest.approx(0.001, abs=1e-12)
    assert mx == pytest.approx(0.001, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(h1=st.floats(-0.01, 0.01), h2=st.floats(-0.01, 0.01))
def test_rms_symmetric_and_bounded_by_max(h1, h2):
    a, b = parabolic_camber(h1), parabolic_camber(h2)
    r_ab, m_ab = profile_rms_error(a, b)
    r_ba, m_ba = profile_rms_error(b, a)
    assert r_ab == pytest.approx(r_ba, abs=1e-15) and m_ab == pytest.approx(m_ba, abs=1e-15)
    assert r_ab <= m_ab + 1e-15


def test_rms_rejects_different_chords():
    with pytest.raises(IncomparableProfilesError):
        profile_rms_error(naca4_profile("0016", 100, 0.230), naca4_profile("0016", 100, 0.240))


def test_self_intersecting_profile_rejected():
    from morphglide.geometry import AirfoilProfile

    with pytest.raises(GeometryError):
        AirfoilProfile([[1, 0], [0, 1], [0, 0], [1, 1], [1, 0]], 1.0)


def test_csv_round_trip(tmp_path):
    p = apply_camber(naca4_profile("0016", 120), parabolic_camber(0.002))
    write_profile_csv(tmp_path / "p.csv", p, {"note": "x"})
    q = read_profile_csv(tmp_path / "p.csv")
    assert np.array_equal(p.points, q.points) and q.chord_m == p.chord_m
    cam = extract_camber(p, 21, inflation_mL=30)
    write_camber_csv(tmp_path / "c.csv", cam)
    back = read_camber_csv(tmp_path / "c.csv")
    assert np.array_equal(back.stations, cam.stations) and back.inflation_mL == 30
    assert (tmp_path / "c.csv").read_text().splitlines()[2] == "x_over_c,y_m"
