"""Command-line front end.

Three subcommands cover the pipeline end to end:

    expose-sim fit       drive-test CSVs -> fitted model file
    expose-sim simulate  run config     -> observation dump + EI report
    expose-sim report    observation dump -> plot-ready CSV tables

Exit codes: 0 on success, 1 for usage errors, 2 for missing or invalid
data, 3 for numerical failures such as a fit that does not converge.
The EXPOSE_SIM_SEED environment variable overrides a config seed; an
explicit --seed flag wins over both.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .exposure import (SarTable, aggregate_ei, write_ei_report_csv,
                       write_ei_report_json)
from .fitting import (FitError, fit_gev, fit_log_distance, fit_scaled_beta,
                      extract_ple_series, ks_test, split_by_breakpoint)
from .ingest import (EmptyInputError, FormatError, merge_records,
                     parse_drive_test, to_pathloss_samples)
from .modelio import save_model
from .pathloss import FrequencyBand, PathLossModel, free_space_intercept
from .distributions import BandedPleDistribution
from .report import emit_report_tables
from .runconfig import load_run_config
from .scenario import ObservationSet, run_simulation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

SEED_ENV_VAR = "EXPOSE_SIM_SEED"

_BANDWIDTH_MHZ = {1800.0: 20.0, 2600.0: 15.0}

log = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(
        prog="expose-sim",
        description="Small-cell exposure modeling: fit propagation "
                    "models from drive tests, simulate a street "
                    "population, and summarize its Exposure Index.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a model file from drive tests")
    fit.add_argument("--in", dest="inputs", nargs="+", required=True,
                     metavar="CSV", help="drive-test export(s)")
    fit.add_argument("--tool", nargs="+", required=True,
                     help="capture tool tag per input (one tag for all)")
    fit.add_argument("--band", type=float, required=True, metavar="MHZ",
                     help="carrier frequency in MHz")
    fit.add_argument("--out", required=True, metavar="MODEL_JSON",
                     help="model file to write")
    fit.add_argument("--schema", metavar="JSON",
                     help="per-tool column maps and site parameters")
    fit.add_argument("--sc-lat", type=float, default=0.0,
                     help="small-cell latitude (default 0)")
    fit.add_argument("--sc-lon", type=float, default=0.0,
                     help="small-cell longitude (default 0)")
    fit.add_argument("--sc-gain-db", type=float, default=0.0,
                     help="small-cell antenna gain (default 0 dBi)")
    fit.add_argument("--rs-dbm", type=float, default=10.0,
                     help="reference-signal power when the export lacks "
                          "an rs_dbm column (default 10 dBm)")
    fit.add_argument("--breakpoint", type=float, default=60.0,
                     metavar="M", help="near/far band split (default 60 m)")
    fit.add_argument("--min-points", type=int, default=50,
                     help="minimum points per band fit (default 50)")
    fit.set_defaults(func=cmd_fit)

    sim = sub.add_parser("simulate", help="run the scenario Monte Carlo")
    sim.add_argument("--config", required=True, metavar="RUN_JSON",
                     help="run configuration")
    sim.add_argument("--out-dir", required=True, metavar="DIR",
                     help="directory for dump and reports")
    sim.add_argument("--seed", type=int, default=None,
                     help=f"override the config seed (also {SEED_ENV_VAR})")
    sim.add_argument("--workers", type=int, default=None,
                     help="override the config worker count")
    sim.set_defaults(func=cmd_simulate)

    rep = sub.add_parser("report", help="tabulate an observation dump")
    rep.add_argument("--obs", required=True, metavar="CSV",
                     help="observation dump from simulate")
    rep.add_argument("--out-dir", required=True, metavar="DIR",
                     help="directory for the plot tables")
    rep.set_defaults(func=cmd_report)
    return parser


def _load_schema(path):
    if path is None:
        return {}
    with open(path) as handle:
        schema = json.load(handle)
    if not isinstance(schema, dict):
        raise FormatError("schema file must hold a JSON object")
    return schema


def cmd_fit(args):
    if len(args.tool) not in (1, len(args.inputs)):
        raise FormatError("--tool needs one tag total or one per input")
    tools = (args.tool * len(args.inputs) if len(args.tool) == 1
             else args.tool)
    schema = _load_schema(args.schema)
    sc_lat = schema.get("sc_lat", args.sc_lat)
    sc_lon = schema.get("sc_lon", args.sc_lon)
    sc_gain = schema.get("sc_gain_db", args.sc_gain_db)
    rs_dbm = schema.get("rs_dbm", args.rs_dbm)

    per_file = []
    rejections = {}
    for path, tool in zip(args.inputs, tools):
        column_map = schema.get("columns", {}).get(tool, {})
        records, tally = parse_drive_test(
            path, tool, column_map=column_map, band_mhz=args.band,
        )
        per_file.append(records)
        for reason, count in tally.items():
            rejections[reason] = rejections.get(reason, 0) + count
    records = merge_records(*per_file)

    samples, tally = to_pathloss_samples(
        records, sc_lat, sc_lon, sc_gain_db=sc_gain, default_rs_dbm=rs_dbm,
    )
    for reason, count in tally.items():
        rejections[reason] = rejections.get(reason, 0) + count
    if not samples:
        raise EmptyInputError("no valid samples")

    band = FrequencyBand(args.band * 1e6,
                         _BANDWIDTH_MHZ.get(args.band, 20.0) * 1e6)
    intercept = free_space_intercept(band)

    regression = fit_log_distance(samples)
    print(f"regression: gamma={regression.gamma_hat:.3f}  "
          f"intercept={regression.intercept_db:.2f} dB  "
          f"mean residual={regression.mean_residual_db:.2f} dB  "
          f"std={regression.residual_std_db:.2f} dB  "
          f"(n={regression.n_points})")

    distances, gammas, n_close = extract_ple_series(samples, intercept)
    if n_close:
        rejections["too_close"] = rejections.get("too_close", 0) + n_close
    (d_near, g_near), (d_far, g_far) = split_by_breakpoint(
        distances, gammas, args.breakpoint,
    )
    near = fit_gev(g_near, min_points=args.min_points)
    far = fit_scaled_beta(g_far, min_points=args.min_points)
    ks_near = ks_test(g_near, near)
    ks_far = ks_test(g_far, far)
    print(f"exponents, d < {args.breakpoint:g} m: "
          f"GEV(k={near.shape_k:.3f}, s={near.scale_s:.3f}, "
          f"m={near.location_m:.3f})  "
          f"KS D={ks_near.ks_statistic:.4f} p={ks_near.ks_p_value:.3f}  "
          f"(n={g_near.size})")
    print(f"exponents, d >= {args.breakpoint:g} m: "
          f"Beta(a1={far.alpha1:.3f}, a2={far.alpha2:.3f}) on "
          f"[{far.lower_a:.3f}, {far.upper_b:.3f}]  "
          f"KS D={ks_far.ks_statistic:.4f} p={ks_far.ks_p_value:.3f}  "
          f"(n={g_far.size})")

    per_tool = {}
    for s in samples:
        per_tool[s.source_tool] = per_tool.get(s.source_tool, 0) + 1
    model = PathLossModel(
        intercept_db=intercept,
        exponent_model=BandedPleDistribution(
            near_model=near, far_model=far, breakpoint_m=args.breakpoint,
        ),
    )
    save_model(args.out, model, band, provenance={
        "tool_counts": per_tool,
        "rejections": rejections,
        "regression": {
            "gamma_hat": regression.gamma_hat,
            "intercept_db": regression.intercept_db,
            "mean_residual_db": regression.mean_residual_db,
            "residual_std_db": regression.residual_std_db,
            "n_points": regression.n_points,
        },
        "ks_near": {"statistic": ks_near.ks_statistic,
                    "p_value": ks_near.ks_p_value,
                    "n_points": ks_near.n_points},
        "ks_far": {"statistic": ks_far.ks_statistic,
                   "p_value": ks_far.ks_p_value,
                   "n_points": ks_far.n_points},
    })
    print(f"model written to {args.out}")
    return EXIT_OK


def _resolve_seed(args, config):
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(
                f"{SEED_ENV_VAR} must be an integer, got {env!r}"
            ) from None
    return config.seed


def cmd_simulate(args):
    config = load_run_config(args.config)
    seed = _resolve_seed(args, config)
    workers = args.workers if args.workers is not None else \
        config.worker_count

    obs = run_simulation(
        config.model, config.radio, config.geometry, config.occupancy,
        config.n_observations, seed, worker_count=workers,
    )

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    obs.to_csv(out_dir / "observations.csv")

    sar_table = SarTable.default()
    breakdowns, total = aggregate_ei(
        obs, sar_table, config.occupancy, config.band,
    )
    meta = {
        "tool_version": __version__,
        "config": config.meta_dict(),
        "seed": seed,
        # knobs that scale the EI directly; keep them visible next to
        # the results they shaped
        "calibration": {
            "resource_blocks_m": config.radio.m_grant,
            "resource_blocks_total": config.radio.m_total,
            "throughput_efficiency": config.radio.throughput_efficiency,
            "throughput_cap_bps": config.radio.throughput_cap_bps,
        },
    }
    meta["config"]["seed"] = seed
    write_ei_report_json(out_dir / "ei_report.json", breakdowns, total, meta)
    entry = sar_table.lookup(obs.band_mhz, config.occupancy.population,
                             config.occupancy.usage,
                             config.occupancy.posture)
    write_ei_report_csv(out_dir / "ei_report.csv", breakdowns, total, entry)

    for b in breakdowns + [total]:
        print(f"{b.stratum:>8}: f={b.fraction:.3f}  "
              f"EI={b.ei_w_per_kg:.3e} W/kg  "
              f"(UL {b.ul_exposure_w_per_kg:.3e}, "
              f"DL {b.dl_exposure_w_per_kg:.3e})")
    print(f"outputs written to {out_dir}")
    return EXIT_OK


def cmd_report(args):
    obs = ObservationSet.from_csv(args.obs)
    written = emit_report_tables(obs, Path(args.out_dir))
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def main(argv=None):
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, NotADirectoryError) as exc:
        print(f"expose-sim: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (FormatError, EmptyInputError, json.JSONDecodeError,
            ValueError) as exc:
        print(f"expose-sim: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (FitError, FloatingPointError, ZeroDivisionError) as exc:
        print(f"expose-sim: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
