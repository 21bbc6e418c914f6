"""
Inflating one chamber of the soft wing
======================================

The upper chamber row is pressurised. The pressure for each injected volume
comes from the quadratic fit to the measured inflation table. The aft part of
the section then bends down and the camber line grows. About a minute.
"""
from morphglide.geometry import extract_camber
from morphglide.pipeline import deform_series
from morphglide.structural import default_pressure_fit, wing_section_mesh

mesh = wing_section_mesh()
print(f"mesh: {mesh.n_nodes} nodes, {mesh.n_elements} quadratic elements")

fit = default_pressure_fit()
print(f"pressure fit: P = {fit.a:.6g} V^2 + {fit.b:.6g} V + {fit.c:.4g}  (kPa, mL)")

results = deform_series(mesh, [0, 15, 30, 60, 90, 120])
print(f"{'V [mL]':>7} {'P [kPa]':>8} {'TE [mm]':>8} {'max |camber| [mm]':>18}")
for v, r in results.items():
    camber = extract_camber(r.profile, inflation_mL=v).stations[:, 1]
    print(f"{v:7g} {r.pressure_kpa:8.2f} {1e3 * r.te_deflection_m:8.2f} {1e3 * abs(camber).max():18.2f}")
