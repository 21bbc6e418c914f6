"""Empirical sectional drag: flat-plate skin friction, a thickness form factor and a lift term.

The lift-dependent term is centred on the section's design lift coefficient,
the lift it produces at zero incidence to its own chord line (zero for a
symmetric section). See docs/dragmodel.md for the closed forms and constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ModelValidityError
from .flow import reynolds
from .panel import solve_unchecked

__all__ = ["DragModel", "skin_friction", "form_factor", "design_lift", "chord_angle_deg", "drag_estimate", "RE_RANGE"]

RE_RANGE = (1e4, 1e7)


@dataclass(frozen=True)
class DragModel:
    """Constants of c_d = 2 c_f(Re) FF(t/c) (1 + k_lift (c_l - c_l_design)^2)."""

    k_lift: float = 0.6
    re_transition: float = 5e5
    ff_linear: float = 2.7
    ff_quartic: float = 100.0

    def __post_init__(self):
        if not self.k_lift > 0:
            raise ValueError("k_lift must be positive")
        if not RE_RANGE[0] < self.re_transition < RE_RANGE[1]:
            raise ValueError("transition Reynolds number must lie inside the model range")


def skin_friction(re, model=None):
    """One-side flat-plate friction coefficient.

    Blasius laminar law up to the transition Reynolds number; above it the
    turbulent 0.074 Re^-1/5 law minus a laminar-run correction A/Re, with A
    chosen so the two branches meet at transition.
    """
    model = model or DragModel()
    lo, hi = RE_RANGE
    if not lo <= re <= hi:
        raise ModelValidityError(f"Re = {re:.3g} outside the drag model range [{lo:.0e}, {hi:.0e}]")
    rt = model.re_transition
    if re <= rt:
        return 1.328 / math.sqrt(re)
    a = rt * (0.074 * rt**-0.2 - 1.328 / math.sqrt(rt))
    return 0.074 * re**-0.2 - a / re


def form_factor(thickness_ratio, model=None):
    model = model or DragModel()
    t = thickness_ratio
    return 1.0 + model.ff_linear * t + model.ff_quartic * t**4


def chord_angle_deg(profile):
    """Inclination of the leading-edge-to-trailing-edge line to the x axis (trailing edge down is negative)."""
    (x_le, y_le), (x_te, y_te) = profile.leading_edge, profile.trailing_edge
    return math.degrees(math.atan2(y_te - y_le, x_te - x_le))


def design_lift(profile):
    """Inviscid lift coefficient at zero incidence to the section's own chord line."""
    return solve_unchecked(profile, chord_angle_deg(profile)).c_l


def drag_estimate(profile, alpha_deg, flow, c_l, model=None, c_l_design=None):
    """Sectional drag coefficient; ``alpha_deg`` enters only through ``c_l``.

    ``c_l_design`` defaults to :func:`design_lift` of the profile; pass it when
    evaluating many incidences of one section.
    """
    model = model or DragModel()
    cf = skin_friction(reynolds(flow), model)
    tau = profile.max_thickness() / profile.chord_m
    if c_l_design is None:
        c_l_design = design_lift(profile)
    return 2.0 * cf * form_factor(tau, model) * (1.0 + model.k_lift * (c_l - c_l_design) ** 2)
