"""Hess-Smith panel method: constant-strength sources per panel plus one uniform vortex sheet.

The section is re-panelled on a cubic arc-length spline with cosine clustering
at the leading and trailing edges before solving, so the result does not depend
on how densely the input outline was sampled.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from ..errors import ContractError, GeometryError

__all__ = ["PanelSolution", "panel_solve", "repanel", "DEFAULT_PANELS", "VALID_ALPHA_DEG", "MAX_ALPHA_DEG"]

DEFAULT_PANELS = 160
VALID_ALPHA_DEG = 8.0  # no stall model: results beyond this are flagged
MAX_ALPHA_DEG = 15.0


class ValidityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PanelSolution:
    """Inviscid solution at one incidence.

    ``x``/``cp`` are control-point abscissae and pressure coefficients ordered
    trailing edge -> lower surface -> leading edge -> upper surface.
    ``c_l_pressure`` is the lift from integrating ``cp``; it should agree with
    the circulation value ``c_l``.
    """

    alpha_deg: float
    c_l: float
    c_m: float
    c_l_pressure: float
    x: np.ndarray
    y: np.ndarray
    cp: np.ndarray
    circulation: float

    def __iter__(self):
        # unpacks as (c_l, c_m, cp)
        return iter((self.c_l, self.c_m, self.cp))


def repanel(profile, n_panels=DEFAULT_PANELS):
    """Node coordinates (n_panels + 1, 2), clockwise from the trailing edge along the lower surface."""
    if n_panels < 20 or n_panels % 2:
        raise ContractError("panel count must be even and at least 20")
    pts = profile.points[::-1]  # clockwise: TE -> lower -> LE -> upper -> TE
    seg = np.hypot(*np.diff(pts, axis=0).T)
    keep = np.concatenate([[True], seg > 1e-12 * profile.chord_m])
    pts = pts[keep]
    s = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(pts, axis=0).T))])
    ile = int(np.argmin(pts[:, 0]))
    spx = CubicSpline(s, pts[:, 0])
    spy = CubicSpline(s, pts[:, 1])
    # refine the leading-edge arc position as the minimum-x point of the spline
    fine = np.linspace(s[max(ile - 1, 0)], s[min(ile + 1, len(s) - 1)], 201)
    s_le = fine[np.argmin(spx(fine))]
    half = n_panels // 2
    b = 0.5 * (1.0 - np.cos(np.linspace(0.0, np.pi, half + 1)))
    ss = np.concatenate([s_le * b, s_le + (s[-1] - s_le) * b[1:]])
    nodes = np.column_stack([spx(ss), spy(ss)])
    nodes[-1] = nodes[0]
    return nodes


def _influence(nodes):
    """Normal and tangential influence coefficients of unit sources and of the unit vortex sheet."""
    x0, y0 = nodes[:-1, 0], nodes[:-1, 1]
    x1, y1 = nodes[1:, 0], nodes[1:, 1]
    dx, dy = x1 - x0, y1 - y0
    length = np.hypot(dx, dy)
    if np.any(length <= 0):
        raise GeometryError("degenerate (zero-length) panel")
    theta = np.arctan2(dy, dx)
    xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)

    # i: control point, j: panel
    rx0 = xm[:, None] - x0[None, :]
    ry0 = ym[:, None] - y0[None, :]
    rx1 = xm[:, None] - x1[None, :]
    ry1 = ym[:, None] - y1[None, :]
    r0 = np.hypot(rx0, ry0)
    r1 = np.hypot(rx1, ry1)
    beta = np.arctan2(rx0 * ry1 - ry0 * rx1, rx0 * rx1 + ry0 * ry1)
    np.fill_diagonal(beta, np.pi)
    with np.errstate(divide="ignore"):
        logr = np.log(r1 / r0)
    np.fill_diagonal(logr, 0.0)
    dth = theta[:, None] - theta[None, :]
    sn, cs = np.sin(dth), np.cos(dth)
    a_n = (sn * logr + cs * beta) / (2 * np.pi)
    a_t = (sn * beta - cs * logr) / (2 * np.pi)
    return a_n, a_t, theta, length, xm, ym


def panel_solve(profile, alpha_deg, flow=None, n_panels=DEFAULT_PANELS):
    """Lift and quarter-chord moment coefficients of a section at incidence ``alpha_deg``.

    Incidence is measured from the x axis of the profile's coordinates. The
    moment is nose-up positive about the point a quarter chord aft of the
    leading edge. ``flow`` is accepted for interface symmetry with the viscous
    routines; the inviscid coefficients do not depend on it.
    """
    if abs(alpha_deg) > MAX_ALPHA_DEG:
        raise ContractError(f"|alpha| = {abs(alpha_deg):g} deg exceeds the {MAX_ALPHA_DEG:g} deg limit")
    if len(profile.points) - 1 < 40:
        raise ContractError("panel_solve needs a profile with at least 40 points")
    if abs(alpha_deg) > VALID_ALPHA_DEG:
        warnings.warn(
            f"alpha = {alpha_deg:g} deg is outside the attached-flow range |alpha| <= {VALID_ALPHA_DEG:g}; "
            "no stall model is applied",
            ValidityWarning,
            stacklevel=2,
        )
    return solve_unchecked(profile, alpha_deg, n_panels)


def solve_unchecked(profile, alpha_deg, n_panels=DEFAULT_PANELS):
    """:func:`panel_solve` without the incidence limits, for internal reference solutions."""
    nodes = repanel(profile, n_panels)
    a_n, a_t, theta, length, xm, ym = _influence(nodes)
    n = len(theta)
    alpha = math.radians(alpha_deg)

    A = np.zeros((n + 1, n + 1))
    rhs = np.zeros(n + 1)
    A[:n, :n] = a_n
    A[:n, n] = -a_t.sum(axis=1)
    rhs[:n] = -np.sin(alpha - theta)
    # Kutta: equal and opposite tangential velocity on the two trailing-edge panels
    A[n, :n] = a_t[0] + a_t[-1]
    A[n, n] = a_n[0].sum() + a_n[-1].sum()
    rhs[n] = -np.cos(alpha - theta[0]) - np.cos(alpha - theta[-1])
    if not np.isfinite(np.linalg.cond(A)) or np.linalg.cond(A) > 1e12:
        raise GeometryError("singular panel influence matrix")
    sol = np.linalg.solve(A, rhs)
    q, gamma = sol[:n], sol[n]

    vt = a_t @ q + gamma * a_n.sum(axis=1) + np.cos(alpha - theta)
    cp = 1.0 - vt**2

    chord = profile.chord_m
    circulation = gamma * length.sum()
    c_l = 2.0 * circulation / chord

    # pressure integration; outward normal of a clockwise loop is (-dy, dx)/ds
    nx, ny = -np.sin(theta), np.cos(theta)
    fx = -np.sum(cp * nx * length) / chord
    fy = -np.sum(cp * ny * length) / chord
    c_l_p = fy * math.cos(alpha) - fx * math.sin(alpha)
    x_le, y_le = profile.leading_edge
    xr, yr = x_le + 0.25 * chord, y_le
    px = -cp * nx * length
    py = -cp * ny * length
    c_m = -float(np.sum((xm - xr) * py - (ym - yr) * px)) / chord**2
    return PanelSolution(float(alpha_deg), float(c_l), c_m, float(c_l_p), xm, ym, cp, float(circulation))
