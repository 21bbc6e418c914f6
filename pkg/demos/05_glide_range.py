"""
Sawtooth glide: rigid against morphing wing
===========================================

A buoyancy glider covers 2 h eta of horizontal range per dive-climb cycle of
depth h, so a better eta gives proportionally more range. This script flies
both wings over the same depth and then runs a scheduled morph scenario that
also pays the hydraulic work of each inflation.
"""
from morphglide.config import load_config, load_yaml
from morphglide.glide import compare_configs, format_report, simulate_sawtooth
from morphglide.pipeline import Pipeline, window

cfg = load_config().with_overrides(sweep={"speeds_mps": [0.26]})
pipe = Pipeline(cfg, cache_dir="morphglide-out/cache")
curves = {v: window(pipe.curve(0.26, v), 0.0, 8.0) for v in (0.0, 15.0)}

print(format_report(compare_configs(curves[0.0], curves[15.0], depth_amplitude_m=1000.0)))

scenario = load_yaml("configs/scenario_schedule.yaml")
path = simulate_sawtooth(
    None,
    curves,
    scenario["depth_amplitude_m"],
    scenario["n_cycles"],
    [tuple(e) for e in scenario["morph_schedule"]],
    buoyancy_energy_j_per_cycle=scenario["buoyancy_energy_j_per_cycle"],
)
print(f"scheduled run: {path.total_range_m / 1e3:.2f} km in {path.cycles} cycles, "
      f"morph work {path.morph_energy_j:.2f} J ({100 * path.morph_energy_fraction:.2f} % of the buoyancy budget)")
