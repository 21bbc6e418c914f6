"""Constitutive laws for the plane-strain wing section.

All routines work on the in-plane 2x2 block of the right Cauchy-Green tensor
``C = F^T F``; the out-of-plane stretch is fixed at 1. Each material returns
the strain energy density ``W``, the second Piola-Kirchhoff stress
``S = 2 dW/dC`` and the material tangent ``CC = 4 d2W/dC2`` for an arbitrary
stack of tensors (leading axes are broadcast).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvertedElementError

__all__ = [
    "HyperelasticMaterial",
    "LinearElasticMaterial",
    "ECOFLEX_00_50",
    "PLA",
    "ALUMINIUM",
    "strain_energy_density",
    "plane_strain_F",
]

_I2 = np.eye(2)
# symmetric fourth-order identity on 2x2 tensors
_IS = 0.5 * (np.einsum("ik,jl->ijkl", _I2, _I2) + np.einsum("il,jk->ijkl", _I2, _I2))
_II = np.einsum("ij,kl->ijkl", _I2, _I2)


def _det2(C):
    return C[..., 0, 0] * C[..., 1, 1] - C[..., 0, 1] * C[..., 1, 0]


def _inv2(C, det):
    inv = np.empty_like(C)
    inv[..., 0, 0] = C[..., 1, 1]
    inv[..., 1, 1] = C[..., 0, 0]
    inv[..., 0, 1] = -C[..., 0, 1]
    inv[..., 1, 0] = -C[..., 1, 0]
    return inv / det[..., None, None]


@dataclass(frozen=True)
class HyperelasticMaterial:
    """Two-parameter Mooney-Rivlin solid with a volumetric penalty.

    W = c1 (I1_bar - 3) + c2 (I2_bar - 3) + bulk/2 (J - 1)^2, where the barred
    invariants are the isochoric ones (J^-2/3 I1, J^-4/3 I2). For volume
    preserving deformations they equal the plain invariants of B = F F^T.
    """

    c1_pa: float
    c2_pa: float
    bulk_penalty_pa: float | None = None
    density_kgpm3: float = 1070.0
    name: str = "mooney-rivlin"

    def __post_init__(self):
        if not self.c1_pa > 0:
            raise ValueError("c1 must be positive")
        if not self.c1_pa + self.c2_pa > 0:
            raise ValueError("c1 + c2 must be positive")
        if self.bulk_penalty_pa is None:
            object.__setattr__(self, "bulk_penalty_pa", 1000.0 * (self.c1_pa + self.c2_pa))
        if self.bulk_penalty_pa < 100.0 * (self.c1_pa + self.c2_pa):
            raise ValueError("bulk penalty must be at least 100 x (c1 + c2)")

    @property
    def shear_modulus_pa(self):
        return 2.0 * (self.c1_pa + self.c2_pa)

    def with_penalty_factor(self, factor):
        return HyperelasticMaterial(
            self.c1_pa, self.c2_pa, factor * (self.c1_pa + self.c2_pa), self.density_kgpm3, self.name
        )

    def energy(self, C):
        det = _det2(C)
        J = np.sqrt(det)
        I1 = C[..., 0, 0] + C[..., 1, 1] + 1.0
        I2 = det + C[..., 0, 0] + C[..., 1, 1]
        return (
            self.c1_pa * (J ** (-2.0 / 3.0) * I1 - 3.0)
            + self.c2_pa * (J ** (-4.0 / 3.0) * I2 - 3.0)
            + 0.5 * self.bulk_penalty_pa * (J - 1.0) ** 2
        )

    def response(self, C):
        """Return (W, S, CC) for a stack of in-plane right Cauchy-Green tensors."""
        c1, c2, k = self.c1_pa, self.c2_pa, self.bulk_penalty_pa
        det = _det2(C)
        J = np.sqrt(det)
        tr = C[..., 0, 0] + C[..., 1, 1]
        I1 = tr + 1.0
        I2 = det + tr
        Ci = _inv2(C, det)

        W = c1 * (J ** (-2 / 3) * I1 - 3) + c2 * (J ** (-4 / 3) * I2 - 3) + 0.5 * k * (J - 1) ** 2
        W1 = c1 * J ** (-2 / 3)
        W2 = c2 * J ** (-4 / 3)
        WJ = -2 / 3 * c1 * J ** (-5 / 3) * I1 - 4 / 3 * c2 * J ** (-7 / 3) * I2 + k * (J - 1)
        W1J = -2 / 3 * c1 * J ** (-5 / 3)
        W2J = -4 / 3 * c2 * J ** (-7 / 3)
        WJJ = 10 / 9 * c1 * J ** (-8 / 3) * I1 + 28 / 9 * c2 * J ** (-10 / 3) * I2 + k

        dI1 = np.broadcast_to(_I2, C.shape)
        dI2 = I1[..., None, None] * _I2 - C
        dJ = 0.5 * J[..., None, None] * Ci
        dCi = -0.5 * (np.einsum("...ik,...jl->...ijkl", Ci, Ci) + np.einsum("...il,...jk->...ijkl", Ci, Ci))
        d2I2 = _II - _IS
        d2J = 0.25 * J[..., None, None, None, None] * np.einsum("...ij,...kl->...ijkl", Ci, Ci) + 0.5 * J[
            ..., None, None, None, None
        ] * dCi

        dW = W1[..., None, None] * dI1 + W2[..., None, None] * dI2 + WJ[..., None, None] * dJ

        def outer(a, b):
            return np.einsum("...ij,...kl->...ijkl", a, b)

        e = (..., None, None, None, None)
        d2W = (
            W1J[e] * (outer(dI1, dJ) + outer(dJ, dI1))
            + W2J[e] * (outer(dI2, dJ) + outer(dJ, dI2))
            + WJJ[e] * outer(dJ, dJ)
            + W2[e] * d2I2
            + WJ[e] * d2J
        )
        return W, 2.0 * dW, 4.0 * d2W


@dataclass(frozen=True)
class LinearElasticMaterial:
    """Isotropic linear elasticity applied to Green-Lagrange strain (Saint Venant-Kirchhoff).

    Small-strain behaviour is that of Hooke's law; large rigid rotations of the
    thin PLA layer are handled exactly.
    """

    young_pa: float
    poisson: float
    density_kgpm3: float = 0.0
    name: str = "linear-elastic"

    def __post_init__(self):
        if not self.young_pa > 0:
            raise ValueError("Young's modulus must be positive")
        if not -1.0 < self.poisson < 0.5:
            raise ValueError("Poisson ratio must lie in (-1, 0.5)")

    @property
    def lame(self):
        E, nu = self.young_pa, self.poisson
        return E * nu / ((1 + nu) * (1 - 2 * nu)), E / (2 * (1 + nu))

    @property
    def shear_modulus_pa(self):
        return self.lame[1]

    def energy(self, C):
        return self.response(C)[0]

    def response(self, C):
        lam, mu = self.lame
        E = 0.5 * (C - _I2)
        trE = E[..., 0, 0] + E[..., 1, 1]
        W = 0.5 * lam * trE**2 + mu * np.einsum("...ij,...ij->...", E, E)
        S = lam * trE[..., None, None] * _I2 + 2.0 * mu * E
        CC = np.broadcast_to(lam * _II + 2.0 * mu * _IS, C.shape + (2, 2))
        return W, S, CC


# Ecoflex 00-50 Mooney-Rivlin constants, PLA and aluminium elastic constants.
ECOFLEX_00_50 = HyperelasticMaterial(c1_pa=4.76e4, c2_pa=1.19e4, density_kgpm3=1.07e3, name="ecoflex-00-50")
PLA = LinearElasticMaterial(young_pa=3.50e9, poisson=0.20, density_kgpm3=1250.0, name="pla")
ALUMINIUM = LinearElasticMaterial(young_pa=6.90e10, poisson=0.33, density_kgpm3=2.70e3, name="aluminium")


def plane_strain_F(F):
    """Return the in-plane 2x2 block of a plane-strain deformation gradient.

    Accepts a 2x2 array, or a 3x3 array whose out-of-plane row/column is that
    of the identity.
    """
    F = np.asarray(F, dtype=float)
    if F.shape == (2, 2):
        return F
    if F.shape == (3, 3):
        if not (np.allclose(F[2, :2], 0) and np.allclose(F[:2, 2], 0) and np.isclose(F[2, 2], 1.0)):
            raise ValueError("3x3 deformation gradient is not plane strain")
        return F[:2, :2]
    raise ValueError(f"deformation gradient must be 2x2 or 3x3, got shape {F.shape}")


def strain_energy_density(F, mat):
    """Strain energy per unit reference volume (J/m^3) for a plane-strain deformation gradient."""
    F2 = plane_strain_F(F)
    J = np.linalg.det(F2)
    if J <= 0:
        raise InvertedElementError(f"det(F) = {J:.3e} <= 0")
    return float(mat.energy(F2.T @ F2))
