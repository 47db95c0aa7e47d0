"""Command-line entry points: generate, calibrate and study.

Exit codes: 0 success, 1 input error, 2 calibration failure, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .activation import derive_activations
from .calibration import calibrate_capacity_price, energy_reference_revenue
from .config import (DEFAULT_THRESHOLD_KW, bundle_to_dict, default_study_spec,
                     default_tariff_bundle, load_tariff_config)
from .errors import CalibrationFailed, CapsubError, ConfigError
from .ingest import (SyntheticPopulationSpec, generate_population, parse_load_csv,
                     scenario_sets_from_series, write_load_csv)
from .study import (build_manifest, run_study, run_study_from_manifest,
                    write_study_outputs)
from .vcl import DEFAULT_SEGMENT_COUNT, VclCurveParams, stacks_for_scenarios

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CALIBRATION = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; map those to input errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="capsub",
                     description="Capacity-subscription grid tariff studies")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic population CSV")
    gen.add_argument("--spec", help="population spec JSON (omit for the bundled default)")
    gen.add_argument("--seed", type=int, help="override the spec's RNG seed")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--write-default-spec", action="store_true",
                     help="also write the effective spec JSON next to the CSV")

    cal = sub.add_parser("calibrate", help="find the revenue-neutral capacity price")
    cal.add_argument("--loads", required=True, help="population load CSV")
    cal.add_argument("--tariff", help="tariff config JSON (omit for bundled defaults)")
    cal.add_argument("--regime", required=True, choices=["static", "dynamic"],
                     help="which capacity-subscription book to calibrate")
    cal.add_argument("--tolerance", type=float, default=1e-4,
                     help="relative revenue gap to accept (default 1e-4)")
    cal.add_argument("--threshold-kw", type=float, default=DEFAULT_THRESHOLD_KW,
                     help="aggregate activation threshold for the dynamic regime")
    cal.add_argument("--vcl-segments", type=int, default=DEFAULT_SEGMENT_COUNT)
    cal.add_argument("--out", required=True, help="output tariff config JSON path")

    stu = sub.add_parser("study", help="run the full multi-year comparison study")
    stu.add_argument("--loads", help="population load CSV")
    stu.add_argument("--tariff", help="tariff config JSON (omit for bundled defaults)")
    stu.add_argument("--regime", choices=["energy", "static", "dynamic"],
                     help="restrict the study to one regime (default: both CS regimes)")
    stu.add_argument("--policy", action="append", choices=["det", "stoch", "reactive"],
                     help="subscription policy to evaluate (repeatable)")
    stu.add_argument("--threshold-kw", type=float, default=DEFAULT_THRESHOLD_KW)
    stu.add_argument("--vcl-segments", type=int, default=DEFAULT_SEGMENT_COUNT)
    stu.add_argument("--seed", type=int, help="recorded in the manifest for provenance")
    stu.add_argument("--jobs", type=int, default=1,
                     help="parallel workers (output is identical for any value)")
    stu.add_argument("--out", required=True, help="output directory")
    stu.add_argument("--from-manifest", help="re-run a previous study from its study.json")

    return parser


def _cmd_generate(args) -> int:
    spec = SyntheticPopulationSpec.from_json(args.spec) if args.spec else default_study_spec()
    if args.seed is not None:
        spec = replace(spec, rng_seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    population = generate_population(spec)
    series = [sc.series for consumer in population for sc in consumer.scenarios]
    csv_path = out / "loads.csv"
    write_load_csv(series, csv_path)
    if args.write_default_spec or not args.spec:
        spec.to_json(out / "population_spec.json")
    print(f"wrote {csv_path} ({spec.consumer_count} consumers x {len(spec.years)} years)")
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    if args.tolerance <= 0.0:
        raise ConfigError(f"tolerance: must be > 0, got {args.tolerance}")
    bundle = load_tariff_config(args.tariff) if args.tariff else default_tariff_bundle()
    population = scenario_sets_from_series(parse_load_csv(args.loads))
    reference = energy_reference_revenue(population, bundle.energy)

    if args.regime == "static":
        base_book = bundle.static
        schedules = None
        stacks = None
    else:
        base_book = bundle.dynamic
        years = population[0].year_labels
        schedules = {
            year: derive_activations(
                [c.scenario_for(year).series for c in population], args.threshold_kw)
            for year in years
        }
        params = VclCurveParams(bundle.dynamic.voll, bundle.vcl_steepness)
        stacks = [stacks_for_scenarios(c, params, args.vcl_segments) for c in population]

    outcome = calibrate_capacity_price(population, base_book, reference, args.tolerance,
                                       schedules=schedules, stacks_by_consumer=stacks)

    if args.regime == "static":
        bundle = replace(bundle, static=outcome.book)
    else:
        bundle = replace(bundle, dynamic=outcome.book)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    payload = bundle_to_dict(bundle)
    payload["calibration"] = {
        "regime": args.regime,
        "capacity_price_eur_per_kw_year": outcome.capacity_price,
        "reference_revenue_eur": outcome.reference_revenue,
        "achieved_aggregate_eur": outcome.achieved_aggregate,
        "relative_gap": outcome.relative_gap,
        "iterations": outcome.iterations,
        "tolerance": args.tolerance,
    }
    out_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"calibrated {args.regime} capacity price: {outcome.capacity_price:.6g} "
          f"EUR/kW-year (relative gap {outcome.relative_gap:.3g})")
    return EXIT_OK


def _cmd_study(args) -> int:
    if args.jobs < 1:
        raise ConfigError(f"jobs: must be >= 1, got {args.jobs}")
    if args.from_manifest:
        result, manifest = run_study_from_manifest(args.from_manifest, jobs=args.jobs)
        write_study_outputs(result, args.out, manifest)
        print(f"re-ran study from {args.from_manifest} into {args.out}")
        return EXIT_OK

    if not args.loads:
        raise ConfigError("study: --loads is required (or --from-manifest)")
    policies = args.policy or []
    if not policies:
        raise ConfigError("study: at least one --policy is required")
    if args.regime == "energy":
        regimes: tuple[str, ...] = ()
    elif args.regime:
        regimes = (args.regime,)
    else:
        regimes = ("static", "dynamic")

    bundle = load_tariff_config(args.tariff) if args.tariff else default_tariff_bundle()
    population = scenario_sets_from_series(parse_load_csv(args.loads))
    result = run_study(population, bundle, policies=policies, regimes=regimes,
                       threshold_kw=args.threshold_kw, vcl_segments=args.vcl_segments,
                       jobs=args.jobs)
    manifest = build_manifest(args.loads, bundle, policies=policies, regimes=regimes,
                              threshold_kw=args.threshold_kw,
                              vcl_segments=args.vcl_segments, seed=args.seed)
    written = write_study_outputs(result, args.out, manifest)
    print(f"study complete: {len(written)} files in {args.out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "calibrate":
            return _cmd_calibrate(args)
        return _cmd_study(args)
    except CalibrationFailed as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except CapsubError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - invariant violations surface as exit 3
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
