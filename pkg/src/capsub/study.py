"""End-to-end multi-year study runner over a consumer population.

Derives activation schedules from the aggregate population load, computes
optimal subscription levels per consumer under the requested policies
(perfect-foresight deterministic, stochastic, reactive), evaluates annual
cost breakdowns for every (regime, policy, year) combination and writes the
reporting tables plus a manifest sufficient to reproduce the run exactly.

Per-consumer work is independent and runs in parallel when requested; the
collected results and all file output are ordered canonically so the output
bytes do not depend on the degree of parallelism.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .activation import ActivationSchedule, derive_activations, write_schedules_csv
from .config import TariffBundle, bundle_from_dict, bundle_to_dict
from .data_model import CostBreakdown, ScenarioSet, full_load_hours, load_factor
from .errors import ConfigError, DomainError, ScenarioMismatch
from .ingest import parse_load_csv, scenario_sets_from_series
from .optimizer import optimize_deterministic, optimize_dynamic, optimize_static
from .reporting import (aggregate_revenue_table, write_aggregate_revenue_csv,
                        write_annual_costs_csv, write_fullloadhours_csv,
                        write_loadfactor_scatter_csv, write_relative_cost_csv,
                        write_subscription_levels_csv)
from .tariff_engine import cost_dynamic_cs, cost_energy_tariff, cost_static_cs
from .vcl import DEFAULT_SEGMENT_COUNT, VclCurveParams, stacks_for_scenarios

MANIFEST_VERSION = 1
MANIFEST_NAME = "study.json"

POLICY_NAMES = ("det", "stoch", "reactive")
CS_REGIMES = ("static", "dynamic")
BASELINE_POLICY = "baseline"


@dataclass(frozen=True)
class ConsumerStudy:
    """All study results of a single consumer."""

    consumer_id: str
    years: tuple[str, ...]
    full_load_hours: dict[str, float]
    load_factors: dict[str, float]
    # (regime, policy) -> [(year_label or "" for set-wide levels, level_kw)]
    levels: dict[tuple[str, str], tuple[tuple[str, float], ...]]
    # (regime, policy, year_label) -> breakdown; regime "energy" uses policy "baseline"
    breakdowns: dict[tuple[str, str, str], CostBreakdown]


@dataclass(frozen=True)
class StudyResult:
    consumers: tuple[ConsumerStudy, ...]
    schedules: dict[str, ActivationSchedule]
    bundle: TariffBundle
    policies: tuple[str, ...]
    regimes: tuple[str, ...]
    threshold_kw: float
    vcl_segments: int

    @property
    def years(self) -> tuple[str, ...]:
        return self.consumers[0].years


def _consumer_worker(args: tuple) -> ConsumerStudy:
    (scenario_set, bundle, schedules, policies, regimes, vcl_segments, min_level) = args
    years = scenario_set.year_labels
    flh = {}
    lf = {}
    levels: dict[tuple[str, str], tuple[tuple[str, float], ...]] = {}
    breakdowns: dict[tuple[str, str, str], CostBreakdown] = {}

    for sc in scenario_set.scenarios:
        year = sc.series.year_label
        flh[year] = full_load_hours(sc.series)
        lf[year] = load_factor(sc.series)
        breakdowns[("energy", BASELINE_POLICY, year)] = cost_energy_tariff(
            sc.series, bundle.energy)

    params = VclCurveParams(bundle.dynamic.voll, bundle.vcl_steepness)
    stacks = stacks_for_scenarios(scenario_set, params, vcl_segments) \
        if "dynamic" in regimes else {}

    for regime in regimes:
        if regime == "static":
            book = bundle.static

            def det_result(year):
                return optimize_deterministic(
                    scenario_set.scenario_for(year).series, book, min_level=min_level)

            def evaluate(year, level):
                return cost_static_cs(scenario_set.scenario_for(year).series, book, level)
        else:
            book = bundle.dynamic

            def det_result(year):
                return optimize_deterministic(
                    scenario_set.scenario_for(year).series, book,
                    schedules[year], stacks[year], min_level=min_level)

            def evaluate(year, level):
                return cost_dynamic_cs(scenario_set.scenario_for(year).series, book,
                                       level, schedules[year], stacks[year])

        det_by_year = {}
        if "det" in policies or "reactive" in policies:
            det_by_year = {year: det_result(year) for year in years}

        if "det" in policies:
            levels[(regime, "det")] = tuple(
                (year, det_by_year[year].decision.level) for year in years)
            for year in years:
                breakdowns[(regime, "det", year)] = det_by_year[year].expected_breakdown

        if "stoch" in policies:
            if regime == "static":
                result = optimize_static(scenario_set, book, min_level=min_level)
            else:
                result = optimize_dynamic(scenario_set, book, schedules, stacks,
                                          min_level=min_level)
            level = result.decision.level
            levels[(regime, "stoch")] = (("", level),)
            for year in years:
                breakdowns[(regime, "stoch", year)] = evaluate(year, level)

        if "reactive" in policies:
            reactive_rows = []
            for prev, year in zip(years, years[1:]):
                level = det_by_year[prev].decision.level
                reactive_rows.append((year, level))
                breakdowns[(regime, "reactive", year)] = evaluate(year, level)
            levels[(regime, "reactive")] = tuple(reactive_rows)

    return ConsumerStudy(scenario_set.consumer_id, years, flh, lf, levels, breakdowns)


def run_study(population: Sequence[ScenarioSet], bundle: TariffBundle, *,
              policies: Sequence[str], regimes: Sequence[str] = CS_REGIMES,
              threshold_kw: float, vcl_segments: int = DEFAULT_SEGMENT_COUNT,
              jobs: int = 1, min_level: float = 0.0) -> StudyResult:
    """Run the full comparison study; deterministic for given inputs."""
    if not population:
        raise DomainError("population must not be empty")
    policies = tuple(dict.fromkeys(policies))
    if not policies:
        raise ConfigError("policies: at least one of det/stoch/reactive is required")
    for policy in policies:
        if policy not in POLICY_NAMES:
            raise ConfigError(f"policies: unknown policy {policy!r}")
    regimes = tuple(dict.fromkeys(regimes))
    for regime in regimes:
        if regime not in CS_REGIMES:
            raise ConfigError(f"regimes: unknown capacity-subscription regime {regime!r}")
    if vcl_segments < 1:
        raise ConfigError(f"vcl_segments: must be >= 1, got {vcl_segments}")

    years = population[0].year_labels
    for consumer in population[1:]:
        if consumer.year_labels != years:
            raise ScenarioMismatch(
                f"consumer {consumer.consumer_id} covers years {consumer.year_labels}, "
                f"expected {years} as for {population[0].consumer_id}")

    schedules = {
        year: derive_activations(
            [consumer.scenario_for(year).series for consumer in population], threshold_kw)
        for year in years
    }

    ordered = sorted(population, key=lambda s: s.consumer_id)
    work = [(consumer, bundle, schedules, policies, regimes, vcl_segments, min_level)
            for consumer in ordered]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            consumers = tuple(pool.map(_consumer_worker, work, chunksize=4))
    else:
        consumers = tuple(map(_consumer_worker, work))

    return StudyResult(consumers, schedules, bundle, policies, tuple(regimes),
                       float(threshold_kw), int(vcl_segments))


# ---------------------------------------------------------------------------
# Manifest and output files
# ---------------------------------------------------------------------------

def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def build_manifest(loads_csv: str | Path, bundle: TariffBundle, *,
                   policies: Sequence[str], regimes: Sequence[str],
                   threshold_kw: float, vcl_segments: int,
                   min_level: float = 0.0, seed: int | None = None) -> dict:
    loads_path = Path(loads_csv)
    return {
        "manifest_version": MANIFEST_VERSION,
        "capsub_version": __version__,
        "inputs": {
            "loads_csv": str(loads_path.resolve()),
            "loads_csv_sha256": _sha256(loads_path),
        },
        "tariff": bundle_to_dict(bundle),
        "params": {
            "policies": list(policies),
            "regimes": list(regimes),
            "threshold_kw": threshold_kw,
            "vcl_segments": vcl_segments,
            "min_level": min_level,
            "seed": seed,
        },
    }


def run_study_from_manifest(manifest_path: str | Path, jobs: int = 1) -> tuple[StudyResult, dict]:
    """Re-run a study exactly as recorded; verifies the input file hash."""
    try:
        manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"manifest {manifest_path}: invalid JSON ({exc})") from exc
    try:
        loads_csv = Path(manifest["inputs"]["loads_csv"])
        recorded_hash = manifest["inputs"]["loads_csv_sha256"]
        bundle = bundle_from_dict(manifest["tariff"])
        params = manifest["params"]
        policies = params["policies"]
        regimes = params["regimes"]
        threshold_kw = params["threshold_kw"]
        vcl_segments = params["vcl_segments"]
        min_level = params.get("min_level", 0.0)
    except KeyError as exc:
        raise ConfigError(f"manifest {manifest_path}: missing field {exc}") from exc
    if not loads_csv.exists():
        raise ConfigError(f"manifest input {loads_csv} does not exist")
    actual_hash = _sha256(loads_csv)
    if actual_hash != recorded_hash:
        raise ConfigError(
            f"manifest input {loads_csv} changed: sha256 {actual_hash} != recorded {recorded_hash}")
    population = scenario_sets_from_series(parse_load_csv(loads_csv))
    result = run_study(population, bundle, policies=policies, regimes=regimes,
                       threshold_kw=threshold_kw, vcl_segments=vcl_segments,
                       jobs=jobs, min_level=min_level)
    return result, manifest


def _policy_cost_total(consumer: ConsumerStudy, regime: str, policy: str,
                       years: Sequence[str], welfare: bool) -> float:
    total = 0.0
    for year in years:
        bd = consumer.breakdowns[(regime, policy, year)]
        total += bd.total_welfare if welfare else bd.total_monetary
    return total


def write_study_outputs(result: StudyResult, out_dir: str | Path,
                        manifest: dict | None = None) -> list[Path]:
    """Write all reporting files; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def record(name: str) -> Path:
        path = out / name
        written.append(path)
        return path

    if manifest is not None:
        path = record(MANIFEST_NAME)
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    years = result.years
    consumers = result.consumers

    write_fullloadhours_csv(
        ((c.consumer_id, year, c.full_load_hours[year], c.load_factors[year])
         for c in consumers for year in years),
        record("fullloadhours.csv"))

    write_schedules_csv((result.schedules[year] for year in years),
                        record("activations.csv"))

    level_rows = []
    for c in consumers:
        for (regime, policy), rows in sorted(c.levels.items()):
            for year, level in rows:
                level_rows.append((c.consumer_id, regime, policy, year, level))
    write_subscription_levels_csv(level_rows, record("subscription_levels.csv"))

    annual_rows = []
    revenue_input = []
    for c in consumers:
        for (regime, policy, year), bd in sorted(c.breakdowns.items()):
            annual_rows.append((c.consumer_id, year, regime, policy, bd))
            revenue_input.append((year, regime, policy, c.consumer_id, bd))
    write_annual_costs_csv(annual_rows, record("annual_costs.csv"))
    write_aggregate_revenue_csv(aggregate_revenue_table(revenue_input),
                                record("aggregate_revenue.csv"))

    consumer_ids = [c.consumer_id for c in consumers]
    energy_totals = [
        _policy_cost_total(c, "energy", BASELINE_POLICY, years, welfare=False)
        for c in consumers
    ]

    for regime in result.regimes:
        welfare = regime == "dynamic"
        if "stoch" in result.policies:
            stoch_totals = [
                _policy_cost_total(c, regime, "stoch", years, welfare) for c in consumers
            ]
            write_relative_cost_csv(
                consumer_ids, stoch_totals, energy_totals,
                record(f"relative_cost_{regime}_stoch_vs_energy.csv"),
                f"{regime} CS stochastic-level cost", "energy tariff cost")
            mean_lf = [sum(c.load_factors[y] for y in years) / len(years) for c in consumers]
            ratios = [a / b for a, b in zip(stoch_totals, energy_totals)]
            write_loadfactor_scatter_csv(
                consumer_ids, mean_lf, ratios,
                record(f"loadfactor_scatter_{regime}.csv"),
                f"{regime} CS stochastic-level cost / energy tariff cost")
        if "reactive" in result.policies and "stoch" in result.policies and len(years) > 1:
            reactive_years = years[1:]
            reactive_totals = [
                _policy_cost_total(c, regime, "reactive", reactive_years, welfare)
                for c in consumers
            ]
            stoch_same_years = [
                _policy_cost_total(c, regime, "stoch", reactive_years, welfare)
                for c in consumers
            ]
            write_relative_cost_csv(
                consumer_ids, reactive_totals, stoch_same_years,
                record(f"relative_cost_{regime}_reactive_vs_stoch.csv"),
                f"{regime} CS reactive-level cost", f"{regime} CS stochastic-level cost")

    return written
