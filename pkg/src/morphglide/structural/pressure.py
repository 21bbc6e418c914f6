"""Mapping between differential inflation (mL of water moved) and chamber pressure."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ExtrapolationError, UnderdeterminedFitError

__all__ = [
    "PressureFit",
    "INFLATION_PRESSURE_TABLE",
    "PRINTED_FIT",
    "fit_pressure_curve",
    "pressure_for_inflation",
    "default_pressure_fit",
    "MAX_INFLATION_ML",
]

# (inflation mL, pressure kPa) pairs at which the simulated camber matched the
# measured one. The zero row is the unloaded state.
INFLATION_PRESSURE_TABLE = ((0.0, 0.0), (30.0, 18.8), (60.0, 35.5), (90.0, 44.3), (120.0, 51.2))

MAX_INFLATION_ML = 150.0


@dataclass(frozen=True)
class PressureFit:
    """P(I) = a I^2 + b I + c, P in kPa and I in mL."""

    a: float
    b: float
    c: float
    source: str = "refit-from-table"

    def __call__(self, inflation_mL):
        i = np.asarray(inflation_mL, dtype=float)
        return self.a * i**2 + self.b * i + self.c

    def rms_residual(self, table):
        t = np.asarray(table, dtype=float)
        return float(np.sqrt(np.mean((self(t[:, 0]) - t[:, 1]) ** 2)))


# Coefficients exactly as printed alongside the published fit. They do not
# reproduce the tabulated pressures (P(30) is about -0.8 kPa), so they are kept
# for reference only.
PRINTED_FIT = PressureFit(-0.025, 0.7273, -0.1543, source="printed")


def fit_pressure_curve(table):
    """Least-squares quadratic through (inflation_mL, pressure_kPa) points."""
    t = np.asarray(table, dtype=float).reshape(-1, 2)
    if len(np.unique(t[:, 0])) < 3:
        raise UnderdeterminedFitError("a quadratic pressure fit needs at least 3 distinct inflation levels")
    a, b, c = np.polyfit(t[:, 0], t[:, 1], 2)
    return PressureFit(float(a), float(b), float(c), source="refit-from-table")


def default_pressure_fit():
    """Refit on the four pressurised table rows (the zero row is handled by clamping)."""
    return fit_pressure_curve(INFLATION_PRESSURE_TABLE[1:])


def pressure_for_inflation(fit, inflation_mL):
    """Chamber pressure in kPa for a differential inflation, clamped at zero."""
    i = float(inflation_mL)
    if not 0.0 <= i <= MAX_INFLATION_ML:
        raise ExtrapolationError(f"inflation {i:g} mL outside the supported range [0, {MAX_INFLATION_ML:g}] mL")
    return max(0.0, float(fit(i)))
