"""
Lift-to-drag ratio of the whole glider
======================================

The soft wing is fitted to a scaled reference hull. The glider's efficiency
eta = L / D is tabulated against hull incidence for each inflation. A little
camber (15 mL) raises the best eta and moves it to a smaller incidence.
"""
from morphglide.config import load_config
from morphglide.pipeline import Pipeline

cfg = load_config().with_overrides(sweep={"speeds_mps": [0.26]})
pipe = Pipeline(cfg, cache_dir="morphglide-out/cache")
vehicle = cfg.vehicle_config()
print(f"vehicle: hull {vehicle.fuselage_length_m:.3f} m x {vehicle.fuselage_diameter_m:.3f} m, "
      f"wing {vehicle.wing_span_m:.3f} m x {vehicle.wing_chord_m:.3f} m")

rigid = pipe.curve(0.26, 0)
for v in cfg.sweep["inflations_mL"]:
    curve = pipe.curve(0.26, v)
    alpha, eta = curve.best(0.0, 8.0)
    print(f"{v:5g} mL: best eta {eta:6.3f} at {alpha:g} deg")

gain = 100 * (pipe.curve(0.26, 15).best(0.0, 8.0)[1] / rigid.best(0.0, 8.0)[1] - 1)
print(f"15 mL over rigid: {gain:+.2f} %")

print("roll moment of a +V / -V wing pair at zero incidence:")
for v, p in pipe.roll(0.26):
    print(f"  {v:5g} mL: {p:+.3f} N m")
