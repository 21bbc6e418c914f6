"""
Hyperelastic silicone: energy, stress and the finite-element residual
=====================================================================

The wing skin is a nearly incompressible Mooney-Rivlin solid. This script
evaluates the energy density for two deformations with known closed forms, then
checks one assembled residual against a finite-difference gradient of the
stored energy.
"""
import numpy as np

from morphglide.structural import (
    ECOFLEX_00_50,
    FEModel,
    rectangle_mesh,
    strain_energy_density,
)

mat = ECOFLEX_00_50
c = mat.c1_pa + mat.c2_pa
print(f"silicone: C1 = {mat.c1_pa:.3g} Pa, C2 = {mat.c2_pa:.3g} Pa")

# simple shear of amount g keeps J = 1 and gives W = (C1 + C2) g^2
g = 0.1
w = strain_energy_density(np.array([[1.0, g], [0.0, 1.0]]), mat)
print(f"simple shear g={g}: W = {w:.6f} J/m^3, closed form {c * g * g:.6f}")

# isochoric in-plane stretch diag(l, 1/l)
lam = 1.2
w = strain_energy_density(np.diag([lam, 1 / lam]), mat)
print(f"stretch l={lam}: W = {w:.6f} J/m^3, closed form {c * (lam**2 + lam**-2 - 2):.6f}")

# internal forces are the gradient of the stored energy
mesh = rectangle_mesh(5, 5, 0.05, 0.01, order=2, jitter=0.25, seed=7)
model = FEModel(mesh, {0: mat}, fixed_sets=())
u = 6e-5 * np.random.default_rng(0).standard_normal(model.n_dofs)
_, f, _ = model.internal(u, tangent=False)
h = 5e-9
fd = np.array([(model.stored_energy(u + h * e) - model.stored_energy(u - h * e)) / (2 * h)
               for e in np.eye(model.n_dofs)])
print(f"{mesh.n_elements} quadratic elements, {model.n_dofs} dofs: "
      f"|f - grad E| / |grad E| = {np.linalg.norm(f - fd) / np.linalg.norm(fd):.2e}")
