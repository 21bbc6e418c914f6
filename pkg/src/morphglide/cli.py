"""``morphglide`` command line: deform -> polar -> vehicle -> glide, plus the full sweep.

Exit status is 0 when every requested cell succeeded, 1 when a computation
failed (non-convergence, failed polar cells) and 2 for bad input (config,
scenario, out-of-range requests).
"""
from __future__ import annotations

import argparse
import hashlib
import logging
import math
import sys
import time
from pathlib import Path

from . import __version__
from .config import data_dir, load_config, load_yaml, parse_alpha_spec
from .errors import (
    ConfigError,
    ContractError,
    ExtrapolationError,
    ModelValidityError,
    MorphGlideError,
    NoSteadyGlideError,
    ScheduleError,
    SweepError,
    UnderdeterminedFitError,
)
from .geometry import extract_camber, write_camber_csv, write_profile_csv
from .glide import compare_configs, format_report, simulate_sawtooth, write_path_csv
from .hydro.polar import POLAR_COLUMNS, polar_filename
from .pipeline import Pipeline, window
from .structural.pressure import INFLATION_PRESSURE_TABLE, PRINTED_FIT, default_pressure_fit
from .tabular import write_json, write_table
from .vehicle import (
    FORCE_COLUMNS,
    MOMENT_COLUMNS,
    efficiency,
    read_efficiency_csv,
    static_stability,
    zero_lift_alpha,
)

log = logging.getLogger("morphglide")

USAGE_ERRORS = (ConfigError, ContractError, ExtrapolationError, ScheduleError, ModelValidityError,
                UnderdeterminedFitError, NoSteadyGlideError)

SCENARIO_KEYS = (
    "rigid_inflation_mL",
    "morph_inflation_mL",
    "speed_mps",
    "depth_amplitude_m",
    "n_cycles",
    "alpha_min_deg",
    "alpha_max_deg",
    "morph_schedule",
    "buoyancy_energy_j_per_cycle",
)


# ---------------------------------------------------------------------------
# output helpers

class Outputs:
    """Writes tables as CSV or JSON with the config hash and version embedded."""

    def __init__(self, root, meta, fmt="csv"):
        self.root = Path(root)
        self.meta = dict(meta)
        self.fmt = fmt
        self.written = []

    def table(self, rel_stem, columns, rows, meta=None, fmt=None):
        fmt = fmt or self.fmt
        info = {**self.meta, **(meta or {})}
        path = self.root / f"{rel_stem}.{fmt}"
        if fmt == "csv":
            write_table(path, columns, rows, info)
        else:
            write_json(path, {"meta": info, "columns": list(columns), "rows": [list(r) for r in rows]})
        self.written.append(path)
        return path

    def json(self, rel_path, payload):
        path = self.root / rel_path
        write_json(path, {"meta": self.meta, **payload})
        self.written.append(path)
        return path

    def text(self, rel_path, body):
        path = self.root / rel_path
        path.parent.mkdir(parents=True, exist_ok=True)
        header = "".join(f"# {k}={v}\n" for k, v in self.meta.items())
        path.write_text(header + body)
        self.written.append(path)
        return path

    def manifest(self):
        files = sorted({p for p in self.written if p.exists()})
        entries = {str(p.relative_to(self.root)): hashlib.sha256(p.read_bytes()).hexdigest() for p in files}
        return self.json("manifest.json", {"files": entries})


def _fmt_u(u):
    return f"U{u:g}"


def _stem_infl(v):
    return f"infl{v:g}"


# ---------------------------------------------------------------------------
# configuration

def resolve_config(args):
    cfg = load_config(args.config)
    sweep = {}
    if args.inflation:
        sweep["inflations_mL"] = list(args.inflation)
    if args.alpha:
        sweep["alphas_deg"] = [a for spec in args.alpha for a in parse_alpha_spec(spec)]
    if args.speed:
        sweep["speeds_mps"] = list(args.speed)
    if args.max_workers is not None:
        sweep["max_workers"] = args.max_workers
    changes = {"sweep": sweep} if sweep else {}
    if args.out:
        changes["output_dir"] = args.out
    return cfg.with_overrides(**changes) if changes else cfg


def load_scenario(path, defaults):
    """Merge a YAML scenario file over the config's glide section; errors carry line numbers."""
    data = load_yaml(path)
    out = dict(defaults)
    lines = getattr(data, "lines", {})
    for key, value in data.items():
        line = lines.get(key, 1)
        if key not in SCENARIO_KEYS:
            raise ConfigError(f"{path}:{line}: unknown scenario key {key!r} (expected one of: {', '.join(SCENARIO_KEYS)})")
        if key == "morph_schedule":
            out[key] = _parse_schedule(value, path, line)
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{path}:{line}: {key} must be a number, got {value!r}")
            out[key] = value
    if int(out["n_cycles"]) != out["n_cycles"] or out["n_cycles"] < 1:
        raise ConfigError(f"{path}:{lines.get('n_cycles', 1)}: n_cycles must be a positive integer")
    if not out["depth_amplitude_m"] > 0:
        raise ConfigError(f"{path}:{lines.get('depth_amplitude_m', 1)}: depth_amplitude_m must be positive")
    return out


def _parse_schedule(value, path, line):
    if value is None:
        return []
    if not isinstance(value, list):
        raise ConfigError(f"{path}:{line}: morph_schedule must be a list of [cycle, inflation_mL] pairs")
    events = []
    for k, item in enumerate(value):
        if isinstance(item, dict):
            item_line = getattr(item, "line", line)
            if set(item) != {"cycle", "inflation_mL"}:
                raise ConfigError(f"{path}:{item_line}: schedule entries need exactly 'cycle' and 'inflation_mL'")
            item = [item["cycle"], item["inflation_mL"]]
        else:
            item_line = line + 1 + k
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)):
            raise ConfigError(f"{path}:{item_line}: schedule entry {k} must be [cycle, inflation_mL]")
        events.append([int(item[0]), float(item[1])])
    return events


# ---------------------------------------------------------------------------
# commands

def cmd_deform(cfg, args, out, pipe):
    results = pipe.deform(cfg.sweep["inflations_mL"])
    ddir = data_dir(cfg)
    report = []
    for infl, r in results.items():
        meta = {
            "structural_hash": cfg.structural_hash,
            "inflation_mL": repr(infl),
            "pressure_kpa": repr(r.pressure_kpa),
            "te_deflection_m": repr(r.te_deflection_m),
            "newton_iterations": str(r.newton_iterations),
            "residual_norm": repr(r.residual_norm),
        }
        path = out.root / "profiles" / f"profile_{_stem_infl(infl)}.csv"
        write_profile_csv(path, r.profile, {**out.meta, **meta})
        out.written.append(path)
        camber = extract_camber(r.profile, n_stations=41, inflation_mL=infl)
        path = out.root / "profiles" / f"camber_{_stem_infl(infl)}.csv"
        write_camber_csv(path, camber, out.meta)
        out.written.append(path)
        entry = {
            "inflation_mL": infl,
            "pressure_kpa": r.pressure_kpa,
            "te_deflection_mm": 1e3 * r.te_deflection_m,
            "camber_max_mm": 1e3 * max(abs(y) for _, y in camber.stations),
            "newton_iterations": r.newton_iterations,
            "residual_norm": r.residual_norm,
            "rms_mm": None,
            "max_mm": None,
            "experimental_file": None,
        }
        rms = pipe.experimental_rms(r, ddir)
        if rms is not None:
            entry["rms_mm"], entry["max_mm"] = 1e3 * rms[0], 1e3 * rms[1]
            entry["experimental_file"] = rms[2].name
        report.append(entry)
        log.info("%g mL: %.2f kPa, trailing edge %.2f mm", infl, r.pressure_kpa, entry["te_deflection_mm"])
    out.json("deform_report.json", {"results": report, "experimental_dir_has_data": any(e["rms_mm"] is not None for e in report)})
    return 0


def cmd_fit_pressure(cfg, args, out, pipe):
    fit = default_pressure_fit()
    rows = [(i, p, float(fit(i)), float(PRINTED_FIT(i))) for i, p in INFLATION_PRESSURE_TABLE]
    out.table("pressure_fit", ("inflation_mL", "table_kpa", "refit_kpa", "printed_kpa"), rows, fmt="csv")
    out.json(
        "pressure_fit.json",
        {
            "refit": {"a": fit.a, "b": fit.b, "c": fit.c, "source": fit.source,
                      "rms_kpa": fit.rms_residual(INFLATION_PRESSURE_TABLE[1:])},
            "printed": {"a": PRINTED_FIT.a, "b": PRINTED_FIT.b, "c": PRINTED_FIT.c, "source": PRINTED_FIT.source,
                        "rms_kpa": PRINTED_FIT.rms_residual(INFLATION_PRESSURE_TABLE[1:])},
        },
    )
    print(f"P(I) = {fit.a:.6g} I^2 + {fit.b:.6g} I + {fit.c:.6g} kPa (I in mL), "
          f"rms {fit.rms_residual(INFLATION_PRESSURE_TABLE[1:]):.3f} kPa")
    return 0


def cmd_polar(cfg, args, out, pipe):
    status = 0
    for u in cfg.sweep["speeds_mps"]:
        try:
            polars = pipe.polars(u)
        except SweepError as exc:
            log.error("%s", exc)
            polars, status = exc.results, 1
        for p in polars:
            stem = "polars/" + polar_filename(p, "x").rsplit(".", 1)[0]
            out.table(stem, POLAR_COLUMNS, p.rows,
                      {"re": repr(float(p.re)), "inflation_mL": repr(p.inflation_mL), "u_mps": repr(float(u))})
    return status


def _stability_text(intervals):
    return ";".join(f"{a:g}..{b:g}" for a, b in intervals) or "none"


def cmd_vehicle(cfg, args, out, pipe):
    alphas = cfg.sweep["alphas_deg"]
    for u in cfg.sweep["speeds_mps"]:
        base = f"vehicle/{_fmt_u(u)}"
        summary = []
        for p in pipe.polars(u):
            infl = p.inflation_mL
            forces = pipe.forces(u, infl)
            curve = pipe.curve(u, infl)
            meta = {"inflation_mL": repr(infl), "u_mps": repr(float(u))}
            out.table(f"{base}/efficiency_{_stem_infl(infl)}", ("alpha_deg", "eta"), curve.rows, meta)
            out.table(f"{base}/forces_{_stem_infl(infl)}", FORCE_COLUMNS,
                      [(f.alpha_deg, f.lift_n, f.drag_n, f.c_l, f.c_d, efficiency(f), f.pitch_moment_nm)
                       for f in forces], meta)
            st = static_stability([(f.alpha_deg, f.pitch_moment_nm) for f in forces], nose_up_positive=True)
            out.table(f"{base}/moments_{_stem_infl(infl)}", MOMENT_COLUMNS,
                      [(f.alpha_deg, f.pitch_moment_nm, s1, s2, s3, int(s1 > 0))
                       for f, s1, s2, s3 in zip(forces, st.m_alpha, st.m_alpha_abs, st.m_alpha_classical)], meta)
            best_a, best_eta = curve.best()
            c_d0 = next((f.c_d for f in forces if f.alpha_deg == 0.0), math.nan)
            summary.append((infl, best_a, best_eta, zero_lift_alpha(forces), c_d0, _stability_text(st.stable_range)))
        out.table(f"{base}/summary",
                  ("inflation_mL", "best_alpha_deg", "max_eta", "zero_lift_alpha_deg", "c_d_alpha0", "stable_intervals"),
                  summary, {"u_mps": repr(float(u)), "alpha_grid": f"{alphas[0]:g}..{alphas[-1]:g}"})
        out.table(f"{base}/roll", ("differential_inflation_mL", "roll_moment_nm"), pipe.roll(u),
                  {"u_mps": repr(float(u)), "alpha_deg": repr(float(cfg.sweep["roll_alpha_deg"]))})
    return 0


def _glide_params(cfg, args):
    params = dict(cfg.glide)
    if getattr(args, "scenario", None):
        params = load_scenario(args.scenario, params)
    for key in ("rigid_inflation_mL", "morph_inflation_mL"):
        if float(params[key]) not in cfg.sweep["inflations_mL"]:
            raise ConfigError(f"glide {key} = {params[key]:g} mL is not in the swept inflations")
    if float(params["speed_mps"]) not in cfg.sweep["speeds_mps"]:
        raise ConfigError(f"glide speed {params['speed_mps']:g} m/s is not in the swept speeds")
    return params


def cmd_glide(cfg, args, out, pipe):
    g = _glide_params(cfg, args)
    u = float(g["speed_mps"])
    a_lo, a_hi = float(g["alpha_min_deg"]), float(g["alpha_max_deg"])
    rigid_i, morph_i = float(g["rigid_inflation_mL"]), float(g["morph_inflation_mL"])
    curves = {p.inflation_mL: pipe.curve(u, p.inflation_mL) for p in pipe.polars(u)}
    schedule = [tuple(e) for e in g["morph_schedule"]] or ([(0, morph_i)] if morph_i != rigid_i else [])
    common = dict(alpha_range=(a_lo, a_hi), buoyancy_energy_j_per_cycle=float(g["buoyancy_energy_j_per_cycle"]))
    rigid_path = simulate_sawtooth(cfg.vehicle_config(), curves[rigid_i], g["depth_amplitude_m"], int(g["n_cycles"]),
                                   **common)
    morph_path = simulate_sawtooth(cfg.vehicle_config(), curves, g["depth_amplitude_m"], int(g["n_cycles"]), schedule,
                                   initial_inflation_mL=rigid_i, **common)
    write_path_csv(out.root / "glide" / "path_rigid.csv", rigid_path, out.meta)
    write_path_csv(out.root / "glide" / "path_morph.csv", morph_path, out.meta)
    out.written += [out.root / "glide" / "path_rigid.csv", out.root / "glide" / "path_morph.csv"]
    report = compare_configs(window(curves[rigid_i], a_lo, a_hi), window(curves[morph_i], a_lo, a_hi),
                             g["depth_amplitude_m"])
    paths = {}
    for name, path in (("rigid", rigid_path), ("morph", morph_path)):
        paths[name] = {
            "cycles": path.cycles,
            "total_range_m": path.total_range_m,
            "duration_s": path.duration_s,
            "morph_energy_j": path.morph_energy_j,
            "buoyancy_energy_j": path.buoyancy_energy_j,
            "morph_events": [[e.cycle, e.from_mL, e.to_mL, e.pressure_pa, e.energy_j] for e in path.events],
        }
    paths["path_range_gain_pct"] = 100.0 * (morph_path.total_range_m / rigid_path.total_range_m - 1.0)
    report = {**report, "alpha_window_deg": [a_lo, a_hi], "paths": paths}
    out.json("glide/report.json", report)
    text = format_report(report) + (
        f"sawtooth over {rigid_path.cycles} cycles: rigid {rigid_path.total_range_m / 1e3:.2f} km, "
        f"morphing {morph_path.total_range_m / 1e3:.2f} km, morph energy {morph_path.morph_energy_j:.3f} J\n"
    )
    out.text("glide/report.txt", text)
    print(text, end="")
    return 0


def cmd_compare(cfg, args, out, pipe):
    if getattr(args, "curves", None):
        if len(args.curves) != 2:
            raise ConfigError("compare takes exactly two efficiency CSV files (reference, candidate)")
        a, b = (read_efficiency_csv(p) for p in args.curves)
        report = compare_configs(a, b)
        out.json("compare/comparison.json", {"files": [str(p) for p in args.curves], **report})
        text = format_report(report)
        out.text("compare/comparison.txt", text)
        print(text, end="")
        return 0
    if 0.0 not in cfg.sweep["inflations_mL"]:
        raise ConfigError("comparison needs the rigid (0 mL) configuration in the swept inflations")
    a_lo, a_hi = float(cfg.glide["alpha_min_deg"]), float(cfg.glide["alpha_max_deg"])
    rows, reports, lines = [], {}, []
    for u in cfg.sweep["speeds_mps"]:
        rigid = window(pipe.curve(u, 0.0), a_lo, a_hi)
        for infl in cfg.sweep["inflations_mL"]:
            if infl == 0.0:
                continue
            rep = compare_configs(rigid, window(pipe.curve(u, infl), a_lo, a_hi), cfg.glide["depth_amplitude_m"])
            reports[f"{_fmt_u(u)}_{_stem_infl(infl)}"] = rep
            rows.append((u, infl, rep["morph"]["best_alpha_deg"], rep["morph"]["max_eta"],
                         rep["rigid"]["best_alpha_deg"], rep["rigid"]["max_eta"], rep["eta_gain_pct"],
                         rep["range_gain_pct"] if rep["range_gain_pct"] is not None else math.nan))
            lines.append(f"U = {u:g} m/s, {infl:g} mL: gain {rep['eta_gain_pct']:+.2f} % "
                         f"(best {rep['morph']['max_eta']:.3f} at {rep['morph']['best_alpha_deg']:g} deg vs "
                         f"{rep['rigid']['max_eta']:.3f} at {rep['rigid']['best_alpha_deg']:g} deg)")
    out.table("compare/gains", ("u_mps", "inflation_mL", "best_alpha_deg", "max_eta", "rigid_best_alpha_deg",
                                "rigid_max_eta", "eta_gain_pct", "range_gain_pct"), rows,
              {"alpha_window_deg": f"{a_lo:g}..{a_hi:g}"})
    out.json("compare/comparison.json", {"alpha_window_deg": [a_lo, a_hi], "comparisons": reports})
    text = "\n".join(lines) + "\n"
    out.text("compare/comparison.txt", text)
    print(text, end="")
    return 0


def cmd_sweep(cfg, args, out, pipe):
    t0 = time.perf_counter()
    status = 0
    for name, fn in (("deform", cmd_deform), ("fit-pressure", cmd_fit_pressure), ("polar", cmd_polar),
                     ("vehicle", cmd_vehicle), ("glide", cmd_glide), ("compare", cmd_compare)):
        log.info("sweep: %s", name)
        status = max(status, fn(cfg, args, out, pipe))
        if status:
            break
    out.manifest()
    log.info("sweep finished in %.1f s", time.perf_counter() - t0)
    return status


COMMANDS = {
    "deform": cmd_deform,
    "fit-pressure": cmd_fit_pressure,
    "polar": cmd_polar,
    "vehicle": cmd_vehicle,
    "glide": cmd_glide,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML run configuration (defaults reproduce the full grid)")
    common.add_argument("--out", metavar="DIR", help="output directory (overrides output_dir)")
    common.add_argument("--inflation", metavar="ML", type=float, action="append",
                        help="differential inflation in mL; repeat for several")
    common.add_argument("--alpha", metavar="DEG", action="append",
                        help="incidence in deg or a start:stop:step range; repeat for several")
    common.add_argument("--speed", metavar="MPS", type=float, action="append", help="flow speed in m/s; repeat")
    common.add_argument("--max-workers", metavar="N", type=int, help="parallel polar cells")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="table output format")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="morphglide", description="Soft camber-morphing wing: inflation, polars, vehicle efficiency and glide range.")
    parser.add_argument("--version", action="version", version=f"morphglide {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("deform", parents=[common], help="solve chamber inflation and write deformed profiles")
    sub.add_parser("fit-pressure", parents=[common], help="refit the inflation-pressure curve")
    sub.add_parser("polar", parents=[common], help="sectional polars per speed and inflation")
    sub.add_parser("vehicle", parents=[common], help="vehicle efficiency, pitch and roll tables")
    g = sub.add_parser("glide", parents=[common], help="sawtooth trajectories and rigid-vs-morphing report")
    g.add_argument("--scenario", metavar="PATH", help="YAML file overriding the glide settings")
    c = sub.add_parser("compare", parents=[common], help="efficiency gains of each inflation over the rigid wing")
    c.add_argument("curves", nargs="*", metavar="CSV", help="two efficiency CSV files to compare instead")
    sw = sub.add_parser("sweep", parents=[common], help="full pipeline on the configured grid")
    sw.add_argument("--scenario", metavar="PATH", help="YAML file overriding the glide settings")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        out = Outputs(cfg.output_dir, {"config_hash": cfg.hash, "version": __version__}, args.format)
        pipe = Pipeline(cfg, cache_dir=Path(cfg.output_dir) / "profiles")
        return COMMANDS[args.command](cfg, args, out, pipe)
    except USAGE_ERRORS as exc:
        print(f"morphglide {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except MorphGlideError as exc:
        print(f"morphglide {args.command}: failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
