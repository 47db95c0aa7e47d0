"""Load-data ingestion: CSV parsing/validation and synthetic population generation.

The CSV wire format is UTF-8 with the exact header
``consumer_id,timestamp,load_kwh``, one row per consumer-hour, ISO-8601
hour-resolution timestamps (``2015-01-31T17:00``) and plain decimal points.
Every (consumer, calendar-year) pair must cover the full year; gaps are
rejected rather than imputed because cost sums and quantile-based optima are
silently corrupted by imputation.
"""

from __future__ import annotations

import calendar
import csv
import json
import math
from dataclasses import asdict, dataclass
from datetime import datetime, timedelta
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .data_model import HourlyLoadSeries, ScenarioSet
from .errors import ConfigError, MalformedRow, MissingHours, NegativeLoad

CSV_HEADER = ["consumer_id", "timestamp", "load_kwh"]
TIMESTAMP_FMT = "%Y-%m-%dT%H:%M"


def hours_in_year(year: int) -> int:
    return 8784 if calendar.isleap(year) else 8760


def _parse_year(label: str) -> int:
    try:
        year = int(label)
    except ValueError as exc:
        raise ConfigError(f"years: {label!r} is not a calendar year") from exc
    if not 1 <= year <= 9999:
        raise ConfigError(f"years: {year} outside the supported calendar range")
    return year


# ---------------------------------------------------------------------------
# Synthetic population generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticPopulationSpec:
    """Recipe for a reproducible synthetic consumer population.

    Hourly loads are base + winter-peaking seasonal sinusoid (scaled by the
    year's cold factor) + evening-peaking daily sinusoid + Poisson demand
    spikes + bounded uniform noise, clamped at zero. The same seed and spec
    always produce a bit-identical population; per-consumer and per-year
    randomness comes from independent streams derived from
    (seed, consumer index, year index).
    """

    consumer_count: int
    years: tuple[str, ...]
    rng_seed: int
    base_load_kw: float
    seasonal_amplitude: float = 0.0
    daily_amplitude: float = 0.0
    spike_rate: float = 0.0
    spike_magnitude: float = 0.0
    noise_amplitude: float = 0.0
    cold_year_factor: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.consumer_count < 1:
            raise ConfigError(f"consumer_count: must be >= 1, got {self.consumer_count}")
        years = tuple(str(y) for y in self.years)
        if not years:
            raise ConfigError("years: must not be empty")
        if len(set(years)) != len(years):
            raise ConfigError("years: labels must be distinct")
        for label in years:
            _parse_year(label)
        object.__setattr__(self, "years", years)
        factors = tuple(float(f) for f in self.cold_year_factor) or (1.0,) * len(years)
        if len(factors) != len(years):
            raise ConfigError(
                f"cold_year_factor: {len(factors)} entries for {len(years)} years")
        for f in factors:
            if not (f >= 0.0 and math.isfinite(f)):
                raise ConfigError(f"cold_year_factor: entries must be >= 0, got {f}")
        object.__setattr__(self, "cold_year_factor", factors)
        for name in ("base_load_kw", "seasonal_amplitude", "daily_amplitude",
                     "spike_rate", "spike_magnitude", "noise_amplitude"):
            value = float(getattr(self, name))
            if not (value >= 0.0 and math.isfinite(value)):
                raise ConfigError(f"{name}: must be >= 0, got {value}")
            object.__setattr__(self, name, value)
        if not isinstance(self.rng_seed, int) or not 0 <= self.rng_seed < 2 ** 64:
            raise ConfigError(f"rng_seed: must be an integer in [0, 2^64), got {self.rng_seed}")

    @classmethod
    def from_json(cls, path: str | Path) -> "SyntheticPopulationSpec":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"population spec {path}: invalid JSON ({exc})") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"population spec {path}: expected a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"population spec: unknown fields {sorted(unknown)}")
        missing = {"consumer_count", "years", "rng_seed", "base_load_kw"} - set(raw)
        if missing:
            raise ConfigError(f"population spec: missing fields {sorted(missing)}")
        for name in ("years", "cold_year_factor"):
            if name in raw and isinstance(raw[name], list):
                raw[name] = tuple(raw[name])
        return cls(**raw)

    def to_json(self, path: str | Path) -> None:
        data = asdict(self)
        data["years"] = list(self.years)
        data["cold_year_factor"] = list(self.cold_year_factor)
        Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def _consumer_traits(seed: int, consumer_index: int) -> dict[str, float]:
    rng = np.random.default_rng([seed, consumer_index])
    return {
        "seasonal_scale": rng.uniform(0.7, 1.3),
        "daily_scale": rng.uniform(0.7, 1.3),
        "seasonal_phase_h": rng.uniform(-360.0, 360.0),
        "daily_peak_hour": rng.uniform(17.0, 20.0),
    }


def _generate_year(spec: SyntheticPopulationSpec, traits: dict[str, float],
                   consumer_index: int, year_index: int) -> np.ndarray:
    year = _parse_year(spec.years[year_index])
    n = hours_in_year(year)
    t = np.arange(n, dtype=np.float64)
    cold = spec.cold_year_factor[year_index]

    seasonal = (spec.seasonal_amplitude * cold * traits["seasonal_scale"]
                * 0.5 * (1.0 + np.cos(2.0 * np.pi * (t - traits["seasonal_phase_h"]) / n)))
    hour_of_day = t % 24.0
    daily = (spec.daily_amplitude * traits["daily_scale"]
             * 0.5 * (1.0 + np.cos(2.0 * np.pi * (hour_of_day - traits["daily_peak_hour"]) / 24.0)))

    rng = np.random.default_rng([spec.rng_seed, consumer_index, year_index])
    noise = spec.noise_amplitude * rng.uniform(-1.0, 1.0, n) if spec.noise_amplitude else 0.0
    spikes = np.zeros(n)
    if spec.spike_rate > 0.0 and spec.spike_magnitude > 0.0:
        count = rng.poisson(spec.spike_rate)
        if count:
            # spikes (heating bursts, EV charging) cluster in high-demand hours
            envelope = np.asarray(seasonal + daily, dtype=np.float64)
            if envelope.max() > 0.0:
                weights = envelope + 0.05 * envelope.max()
                weights /= weights.sum()
                where = rng.choice(n, size=count, p=weights)
            else:
                where = rng.integers(0, n, count)
            magnitude = spec.spike_magnitude * rng.uniform(0.5, 1.5, count)
            np.add.at(spikes, where, magnitude)

    return np.clip(spec.base_load_kw + seasonal + daily + noise + spikes, 0.0, None)


def generate_population(spec: SyntheticPopulationSpec) -> list[ScenarioSet]:
    """Deterministically generate one equiprobable ScenarioSet per consumer."""
    population = []
    width = len(str(spec.consumer_count - 1)) if spec.consumer_count > 1 else 1
    for i in range(spec.consumer_count):
        traits = _consumer_traits(spec.rng_seed, i)
        consumer_id = f"c{i:0{width}d}"
        series = [
            HourlyLoadSeries(consumer_id, spec.years[y],
                             _generate_year(spec, traits, i, y))
            for y in range(len(spec.years))
        ]
        population.append(ScenarioSet.equiprobable(series))
    return population


# ---------------------------------------------------------------------------
# CSV parsing and writing
# ---------------------------------------------------------------------------

def parse_load_csv(path: str | Path) -> list[HourlyLoadSeries]:
    """Parse and validate a load CSV into full-year series.

    Returns one series per (consumer, year), each sorted by hour and fully
    covering its calendar year. Raises MissingHours for gaps, NegativeLoad
    for negative values and MalformedRow (with the line number) for anything
    unparseable.
    """
    groups: dict[tuple[str, int], dict[int, float]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise MalformedRow(
                f"line 1: expected header {','.join(CSV_HEADER)!r}, got {header}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise MalformedRow(f"line {line_no}: expected 3 columns, got {len(row)}")
            consumer_id, ts_text, load_text = row
            if not consumer_id:
                raise MalformedRow(f"line {line_no}: empty consumer_id")
            try:
                ts = datetime.strptime(ts_text, TIMESTAMP_FMT)
            except ValueError as exc:
                raise MalformedRow(f"line {line_no}: bad timestamp {ts_text!r}") from exc
            if ts.minute != 0:
                raise MalformedRow(
                    f"line {line_no}: timestamp {ts_text!r} is not at hour resolution")
            try:
                load = float(load_text)
            except ValueError as exc:
                raise MalformedRow(f"line {line_no}: bad load value {load_text!r}") from exc
            if not math.isfinite(load):
                raise MalformedRow(f"line {line_no}: non-finite load value {load_text!r}")
            if load < 0.0:
                raise NegativeLoad(
                    f"line {line_no}: negative load {load} for consumer {consumer_id} at {ts_text}")
            hour_index = int((ts - datetime(ts.year, 1, 1)).total_seconds() // 3600)
            hours = groups.setdefault((consumer_id, ts.year), {})
            if hour_index in hours:
                raise MalformedRow(
                    f"line {line_no}: duplicate hour {ts_text} for consumer {consumer_id}")
            hours[hour_index] = load

    series_list = []
    for (consumer_id, year), hours in sorted(groups.items()):
        expected = hours_in_year(year)
        if len(hours) != expected:
            missing = next(h for h in range(expected) if h not in hours)
            ts = datetime(year, 1, 1) + timedelta(hours=missing)
            raise MissingHours(
                f"consumer {consumer_id} year {year}: missing hour "
                f"{ts.strftime(TIMESTAMP_FMT)} ({len(hours)} of {expected} hours present)")
        loads = np.empty(expected)
        for hour_index, load in hours.items():
            loads[hour_index] = load
        series_list.append(HourlyLoadSeries(consumer_id, str(year), loads))
    return series_list


def write_load_csv(series_list: Sequence[HourlyLoadSeries], path: str | Path) -> None:
    """Write series in the wire format; floats keep full round-trip precision."""
    ordered = sorted(series_list, key=lambda s: (s.consumer_id, s.year_label))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for series in ordered:
            start = datetime(_parse_year(series.year_label), 1, 1)
            for hour, load in enumerate(series.loads.tolist()):
                ts = start + timedelta(hours=hour)
                writer.writerow([series.consumer_id, ts.strftime(TIMESTAMP_FMT), repr(load)])


def scenario_sets_from_series(series_list: Iterable[HourlyLoadSeries]) -> list[ScenarioSet]:
    """Group per-year series by consumer into equiprobable scenario sets."""
    by_consumer: dict[str, list[HourlyLoadSeries]] = {}
    for series in series_list:
        by_consumer.setdefault(series.consumer_id, []).append(series)
    return [
        ScenarioSet.equiprobable(sorted(series, key=lambda s: s.year_label))
        for _, series in sorted(by_consumer.items())
    ]
