"""Wing-section geometry: NACA 4-digit profiles, camber morphs and profile comparison.

Coordinates are in metres. A profile is stored as a closed polyline that starts
at the trailing edge, runs forward over the upper surface to the leading edge
and returns aft along the lower surface (counter-clockwise).

Sign convention for camber: a camber offset is the vertical (y) displacement of
the mean line relative to the leading edge. A negative trailing-edge offset
(trailing edge pushed down) is positive camber in the usual aerodynamic sense:
it adds incidence and lift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    GeometryError,
    ImplausibleMorphError,
    IncomparableProfilesError,
    InvalidDiscretizationError,
    ResolutionError,
)
from .tabular import read_table, write_table

__all__ = [
    "DEFAULT_CHORD_M",
    "AirfoilProfile",
    "CamberLine",
    "EffectiveAoA",
    "naca4_profile",
    "apply_camber",
    "extract_camber",
    "effective_aoa",
    "parabolic_camber",
    "profile_rms_error",
    "mirror_profile",
    "cosine_stations",
    "read_profile_csv",
    "write_profile_csv",
    "read_camber_csv",
    "write_camber_csv",
]

DEFAULT_CHORD_M = 0.230
CLOSURE_TOL = 1e-9


def cosine_stations(n):
    """``n`` chordwise fractions in [0, 1], clustered at both ends."""
    beta = np.linspace(0.0, np.pi, n)
    return 0.5 * (1.0 - np.cos(beta))


def _segments_intersect(points):
    """True if any two non-adjacent segments of the closed polyline cross."""
    p = points[:-1]
    q = points[1:]
    n = len(p)
    if n < 4:
        return False
    d = q - p
    # pairwise orientation tests, all pairs at once
    ax, ay = p[:, None, 0], p[:, None, 1]
    dx, dy = d[:, None, 0], d[:, None, 1]
    bx, by = p[None, :, 0], p[None, :, 1]
    ex, ey = d[None, :, 0], d[None, :, 1]
    denom = dx * ey - dy * ex
    with np.errstate(divide="ignore", invalid="ignore"):
        t = ((bx - ax) * ey - (by - ay) * ex) / denom
        u = ((bx - ax) * dy - (by - ay) * dx) / denom
    eps = 1e-12
    hit = (np.abs(denom) > 1e-300) & (t > eps) & (t < 1 - eps) & (u > eps) & (u < 1 - eps)
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    adjacent = (gap <= 1) | (gap == n - 1)
    return bool(np.any(hit & ~adjacent))


@dataclass(frozen=True)
class AirfoilProfile:
    """Closed 2D wing section.

    ``points`` has shape (n + 1, 2); the first and last rows coincide at the
    trailing edge.
    """

    points: np.ndarray
    chord_m: float
    name: str = ""

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 4:
            raise GeometryError("profile points must be an (n, 2) array with n >= 4")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("profile points must be finite")
        if not self.chord_m > 0:
            raise GeometryError(f"chord must be positive, got {self.chord_m}")
        if np.linalg.norm(pts[0] - pts[-1]) > CLOSURE_TOL:
            raise GeometryError("profile is not closed at the trailing edge")
        if _segments_intersect(pts):
            raise GeometryError(f"profile {self.name!r} is self-intersecting")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def x(self):
        return self.points[:, 0]

    @property
    def y(self):
        return self.points[:, 1]

    @property
    def leading_edge_index(self):
        return int(np.argmin(self.points[:, 0]))

    @property
    def leading_edge(self):
        return self.points[self.leading_edge_index]

    @property
    def trailing_edge(self):
        return self.points[0]

    def surfaces(self):
        """Return (upper, lower) point arrays, each ordered leading edge to trailing edge."""
        ile = self.leading_edge_index
        upper = self.points[: ile + 1][::-1]
        lower = self.points[ile:]
        return upper, lower

    def max_thickness(self):
        """Largest vertical gap between the surfaces, sampled on the upper-surface stations."""
        upper, lower = self.surfaces()
        yl = np.interp(upper[:, 0], lower[:, 0], lower[:, 1])
        return float(np.max(upper[:, 1] - yl))

    def translated(self, dx=0.0, dy=0.0):
        return AirfoilProfile(self.points + np.array([dx, dy]), self.chord_m, self.name)


@dataclass(frozen=True)
class CamberLine:
    """Mean-line offsets at chordwise stations.

    ``stations[:, 0]`` are x/c fractions, ``stations[:, 1]`` vertical offsets
    in metres relative to the leading edge.
    """

    stations: np.ndarray
    inflation_mL: float = 0.0
    chord_m: float = DEFAULT_CHORD_M

    def __post_init__(self):
        st = np.array(self.stations, dtype=float)
        if st.ndim != 2 or st.shape[1] != 2 or len(st) < 2:
            raise GeometryError("camber stations must be an (m, 2) array with m >= 2")
        if np.any(np.diff(st[:, 0]) <= 0):
            raise GeometryError("camber stations must have strictly increasing x/c")
        if st[0, 0] == 0.0 and abs(st[0, 1]) > 1e-12:
            raise GeometryError("camber offset at the leading edge must be zero")
        st.setflags(write=False)
        object.__setattr__(self, "stations", st)

    @property
    def x_over_c(self):
        return self.stations[:, 0]

    @property
    def offsets(self):
        return self.stations[:, 1]

    def __call__(self, x_over_c):
        """Offset in metres at arbitrary x/c, by cubic interpolation of the stations."""
        s = np.clip(np.asarray(x_over_c, dtype=float), self.x_over_c[0], self.x_over_c[-1])
        return CubicSpline(self.x_over_c, self.offsets)(s)

    def max_offset(self):
        """(x/c, offset) of the station with the largest |offset|."""
        i = int(np.argmax(np.abs(self.offsets)))
        return float(self.x_over_c[i]), float(self.offsets[i])


@dataclass(frozen=True)
class EffectiveAoA:
    alpha_deg: float
    alpha_wing_deg: float


def _naca4_digits(code):
    code = str(code).strip()
    if len(code) != 4 or not code.isdigit():
        raise ValueError(f"NACA 4-digit code must be four digits, got {code!r}")
    m = int(code[0]) / 100.0
    p = int(code[1]) / 10.0
    t = int(code[2:]) / 100.0
    if t <= 0:
        raise ValueError(f"NACA code {code!r} has zero thickness")
    if (m > 0) != (p > 0):
        raise ValueError(f"NACA code {code!r}: camber and its position must both be zero or both non-zero")
    return m, p, t


def naca4_profile(code, n_points=200, chord_m=DEFAULT_CHORD_M):
    """Closed NACA 4-digit section with ``n_points`` panels on cosine-spaced stations.

    Uses the closed trailing-edge variant of the thickness polynomial
    (last coefficient -0.1036).
    """
    m, p, t = _naca4_digits(code)
    if n_points < 40 or n_points % 2:
        raise InvalidDiscretizationError(f"n_points must be an even count >= 40, got {n_points}")
    xc = cosine_stations(n_points // 2 + 1)
    yt = 5.0 * t * (0.2969 * np.sqrt(xc) - 0.1260 * xc - 0.3516 * xc**2 + 0.2843 * xc**3 - 0.1036 * xc**4)
    yt[-1] = 0.0
    if m == 0:
        xu, yu, xl, yl = xc, yt, xc, -yt
    else:
        fore = xc <= p
        yc = np.where(fore, m / p**2 * (2 * p * xc - xc**2), m / (1 - p) ** 2 * (1 - 2 * p + 2 * p * xc - xc**2))
        dyc = np.where(fore, 2 * m / p**2 * (p - xc), 2 * m / (1 - p) ** 2 * (p - xc))
        theta = np.arctan(dyc)
        xu, yu = xc - yt * np.sin(theta), yc + yt * np.cos(theta)
        xl, yl = xc + yt * np.sin(theta), yc - yt * np.cos(theta)
    upper = np.column_stack([xu, yu])[::-1]
    lower = np.column_stack([xl, yl])[1:]
    pts = np.vstack([upper, lower]) * chord_m
    pts[-1] = pts[0]
    return AirfoilProfile(pts, chord_m, f"NACA{code}")


def parabolic_camber(max_offset_m, n_stations=41, chord_m=DEFAULT_CHORD_M, inflation_mL=0.0):
    """Circular-arc-like parabolic mean line y = 4 h s (1 - s), peak ``h`` at mid chord."""
    s = np.linspace(0.0, 1.0, n_stations)
    return CamberLine(np.column_stack([s, 4.0 * max_offset_m * s * (1.0 - s)]), inflation_mL, chord_m)


def _chord_fraction(profile):
    x_le = profile.leading_edge[0]
    x_te = profile.trailing_edge[0]
    span = x_te - x_le
    if span <= 0:
        raise GeometryError("trailing edge must lie aft of the leading edge")
    return (profile.x - x_le) / span


def apply_camber(profile, camber):
    """Shear both surfaces vertically by the camber offset at each point's x/c.

    x/c is measured along the profile's own projected extent, leading edge
    (minimum x) to trailing edge, so :func:`extract_camber` is its inverse.
    """
    xs = camber.x_over_c
    if xs[0] > 1e-12 or xs[-1] < 1.0 - 1e-12:
        raise GeometryError("camber stations must span x/c in [0, 1]")
    if np.max(np.abs(camber.offsets)) > 0.5 * profile.chord_m:
        raise ImplausibleMorphError("camber offset exceeds half the chord")
    s = _chord_fraction(profile)
    pts = profile.points.copy()
    pts[:, 1] += camber(s)
    pts[-1] = pts[0]
    return AirfoilProfile(pts, profile.chord_m, profile.name)


def _surface_spline(surface):
    x = surface[:, 0]
    if np.any(np.diff(x) <= 0):
        raise GeometryError("surface x coordinates must increase from leading to trailing edge")
    return CubicSpline(x, surface[:, 1])


def extract_camber(profile, n_stations=41, inflation_mL=0.0):
    """Mean line at ``n_stations`` cosine-spaced x/c stations, offsets relative to the leading edge."""
    if len(profile.points) - 1 < n_stations:
        raise ResolutionError(
            f"profile has {len(profile.points) - 1} points, fewer than the {n_stations} stations requested"
        )
    upper, lower = profile.surfaces()
    su, sl = _surface_spline(upper), _surface_spline(lower)
    x_le, y_le = profile.leading_edge
    x_te = profile.trailing_edge[0]
    s = cosine_stations(n_stations)
    x = x_le + s * (x_te - x_le)
    mid = 0.5 * (su(x) + sl(x)) - y_le
    mid[0] = 0.0
    return CamberLine(np.column_stack([s, mid]), inflation_mL, profile.chord_m)


def effective_aoa(camber, alpha_deg):
    """Chord-line angle of attack after morphing.

    The morph rotates the chord line by atan(-(y_te - y_le) / c), so a trailing
    edge pushed down adds incidence.
    """
    xs = camber.x_over_c
    if xs[0] > 1e-12 or xs[-1] < 1.0 - 1e-12:
        raise GeometryError("camber stations must include x/c = 0 and x/c = 1")
    rise = camber.offsets[-1] - camber.offsets[0]
    return EffectiveAoA(alpha_deg, alpha_deg + math.degrees(math.atan(-rise / camber.chord_m)))


def mirror_profile(profile, name=None):
    """Reflect y -> -y, keeping the counter-clockwise point order."""
    pts = profile.points * np.array([1.0, -1.0])
    return AirfoilProfile(pts[::-1], profile.chord_m, name if name is not None else profile.name)


def profile_rms_error(a, b, n_stations=101):
    """RMS and maximum vertical deviation between two profiles or two camber lines, metres.

    Both inputs are resampled on the same cosine-spaced x/c stations; profiles
    are compared surface by surface.
    """
    if isinstance(a, CamberLine) != isinstance(b, CamberLine):
        raise TypeError("profile_rms_error compares two profiles or two camber lines, not a mix")
    if abs(a.chord_m - b.chord_m) > 0.01 * max(a.chord_m, b.chord_m):
        raise IncomparableProfilesError(f"chords differ by more than 1%: {a.chord_m} vs {b.chord_m}")
    s = cosine_stations(n_stations)
    if isinstance(a, CamberLine):
        dev = a(s) - b(s)
    else:
        dev = _surface_samples(a, s) - _surface_samples(b, s)
    dev = np.abs(dev)
    return float(np.sqrt(np.mean(dev**2))), float(np.max(dev))


def _surface_samples(profile, s):
    upper, lower = profile.surfaces()
    x_le = profile.leading_edge[0]
    x_te = profile.trailing_edge[0]
    x = x_le + s * (x_te - x_le)
    return np.concatenate([_surface_spline(upper)(x), _surface_spline(lower)(x)])


# ---------------------------------------------------------------------------
# CSV import/export

def write_profile_csv(path, profile, meta=None):
    info = {"name": profile.name, "chord_m": repr(profile.chord_m)}
    info.update(meta or {})
    write_table(path, ("x_m", "y_m"), profile.points, info)


def read_profile_csv(path, chord_m=None, name=None):
    rows, meta = read_table(path, ("x_m", "y_m"))
    if chord_m is None:
        chord_m = float(meta["chord_m"]) if "chord_m" in meta else float(np.ptp(rows[:, 0]))
    if np.linalg.norm(rows[0] - rows[-1]) > CLOSURE_TOL:
        rows = np.vstack([rows, rows[:1]])
    return AirfoilProfile(rows, chord_m, name if name is not None else meta.get("name", Path(path).stem))


def write_camber_csv(path, camber, meta=None):
    info = {"inflation_mL": repr(float(camber.inflation_mL)), "chord_m": repr(camber.chord_m)}
    info.update(meta or {})
    write_table(path, ("x_over_c", "y_m"), camber.stations, info)


def read_camber_csv(path, chord_m=None, inflation_mL=None):
    rows, meta = read_table(path, ("x_over_c", "y_m"))
    if chord_m is None:
        chord_m = float(meta.get("chord_m", DEFAULT_CHORD_M))
    if inflation_mL is None:
        inflation_mL = float(meta.get("inflation_mL", 0.0))
    return CamberLine(rows, inflation_mL, chord_m)
