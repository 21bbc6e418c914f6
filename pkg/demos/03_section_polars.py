"""
Sectional polars of the morphed wing
====================================

Each deformed section goes through the panel method for lift and moment, and
through the empirical buildup for drag. Inflating shifts the zero-lift angle
to negative incidence. The lift slope barely changes.
"""
from morphglide.config import load_config
from morphglide.pipeline import Pipeline

cfg = load_config().with_overrides(sweep={"speeds_mps": [0.26]})
pipe = Pipeline(cfg, cache_dir="morphglide-out/cache")

print(f"{'V [mL]':>7} {'alpha_L0 [deg]':>15} {'c_l(0)':>8} {'c_d(0)':>8}")
for polar in pipe.polars(0.26):
    c_l, c_d, _ = polar.at(0.0)
    print(f"{polar.inflation_mL:7g} {polar.zero_lift_alpha():15.2f} {c_l:8.3f} {c_d:8.4f}")
