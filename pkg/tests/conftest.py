import numpy as np
import pytest

from capsub import HourlyLoadSeries, LoadScenario, ScenarioSet, TariffBook


@pytest.fixture
def energy_book():
    return TariffBook.energy_only(204.6, 1.859 / 100.0)


@pytest.fixture
def static_book():
    return TariffBook.static_cs(135.0, 67.5, 0.5 / 100.0, 10.0 / 100.0)


@pytest.fixture
def dynamic_book():
    return TariffBook.dynamic_cs(135.0, 54.0, 0.5 / 100.0, 5.0)


def make_series(loads, consumer_id="c0", year_label="2015"):
    return HourlyLoadSeries(consumer_id, year_label, np.asarray(loads, dtype=float))


def singleton_set(series):
    return ScenarioSet((LoadScenario(series, 1.0),))


@pytest.fixture
def series_factory():
    return make_series


@pytest.fixture
def singleton_factory():
    return singleton_set
