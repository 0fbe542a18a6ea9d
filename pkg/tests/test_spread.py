import math
from unittest.mock import patch

import numpy as np
import pytest

from src.config import settings
from src.errors import DomainError
from src.services.modone import (
    BenfordDecade,
    PowerOfUniform,
    UniformContinuous,
    UniformIntegers,
    sample,
)
from src.services.spread import SpreadScale, spread_analytic, spread_sample

LN10 = math.log(10.0)


def test_uniform_raw():
    report = spread_analytic(UniformContinuous(T=10.0))
    assert report.range == 10.0
    assert report.quantile_spread == pytest.approx(5.0)
    assert report.std_dev == pytest.approx(10.0 / math.sqrt(12.0))
    assert report.gini_mean_difference == pytest.approx(10.0 / 3.0)
    assert not any(report.estimated.values())


def test_uniform_log_scale_has_infinite_range():
    report = spread_analytic(UniformContinuous(T=2.0), SpreadScale.LOG)
    assert math.isinf(report.range)
    assert report.quantile_spread == pytest.approx(math.log10(3.0))
    assert report.std_dev == pytest.approx(1.0 / LN10)
    assert report.gini_mean_difference == pytest.approx(1.0 / LN10)
    assert '"Infinity"' in report.model_dump_json()


def test_power_of_uniform_raw():
    x = spread_analytic(PowerOfUniform(a=1.0))
    z = spread_analytic(PowerOfUniform(a=1.5))
    assert x.range == pytest.approx(9.0)
    assert z.range == pytest.approx(10.0 ** 1.5 - 1.0)
    assert x.gini_mean_difference == pytest.approx(2.76445, rel=1e-5)
    assert z.gini_mean_difference == pytest.approx(8.6225, rel=1e-4)
    assert x.quantile_spread == pytest.approx(10.0 ** 0.75 - 10.0 ** 0.25)


def test_power_of_uniform_log():
    report = spread_analytic(PowerOfUniform(a=1.5), SpreadScale.LOG)
    assert report.range == pytest.approx(1.5)
    assert report.quantile_spread == pytest.approx(0.75)
    assert report.std_dev == pytest.approx(1.5 / math.sqrt(12.0))
    assert report.gini_mean_difference == pytest.approx(0.5)


def test_log_spread_scales_with_base():
    dist = PowerOfUniform(a=1.0, base=10)
    ratio = spread_analytic(dist, SpreadScale.LOG, base=2).std_dev / spread_analytic(dist, SpreadScale.LOG).std_dev
    assert ratio == pytest.approx(math.log2(10.0), abs=1e-12)


def test_analytic_matches_sample_measures():
    dist = PowerOfUniform(a=1.0)
    exact = spread_analytic(dist)
    estimate = spread_sample(sample(dist, 200_000, seed=5))
    assert estimate.quantile_spread == pytest.approx(exact.quantile_spread, rel=0.02)
    assert estimate.std_dev == pytest.approx(exact.std_dev, rel=0.02)
    assert estimate.gini_mean_difference == pytest.approx(exact.gini_mean_difference, rel=0.02)


def test_loglog_scale():
    report = spread_analytic(BenfordDecade(k=1), SpreadScale.LOGLOG)
    assert report.range == pytest.approx(math.log10(2.0))
    for dist in (UniformContinuous(T=5.0), UniformIntegers(N=10), BenfordDecade(k=-1)):
        with pytest.raises(DomainError):
            spread_analytic(dist, SpreadScale.LOGLOG)


def test_uniform_integers():
    raw = spread_analytic(UniformIntegers(N=10))
    assert raw.range == 9.0
    assert raw.std_dev == pytest.approx(math.sqrt(99.0 / 12.0))
    assert raw.gini_mean_difference == pytest.approx(99.0 / 30.0)
    log = spread_analytic(UniformIntegers(N=10), SpreadScale.LOG)
    assert log.range == pytest.approx(1.0)


def test_uniform_integers_above_capacity_is_estimated():
    with patch.object(settings, "MAX_ATOMS", 50):
        report = spread_analytic(UniformIntegers(N=1000), SpreadScale.LOG, seed=1, samples=20_000)
    assert report.range == pytest.approx(3.0)
    assert report.estimated["std_dev"]
    assert not report.estimated["range"]


def test_alpha_domain():
    with pytest.raises(DomainError):
        spread_analytic(UniformContinuous(T=1.0), alpha=0.5)
    with pytest.raises(DomainError):
        spread_sample([1.0, 2.0], alpha=0.0)


def test_sample_measures():
    report = spread_sample([4.0, 1.0, 3.0, 2.0])
    assert report.range == 3.0
    assert report.quantile_spread == pytest.approx(1.5)
    assert report.std_dev == pytest.approx(np.std([1, 2, 3, 4], ddof=1))
    assert report.gini_mean_difference == pytest.approx(5.0 / 3.0)


def test_sample_log_scale_rejects_non_positive():
    with pytest.raises(DomainError) as info:
        spread_sample([1.0, 5.0, 0.0], SpreadScale.LOG)
    assert info.value.index == 2
    with pytest.raises(DomainError):
        spread_sample([2.0, 0.5], SpreadScale.LOGLOG)
    with pytest.raises(DomainError):
        spread_sample([2.0])


MEASURES = ("range", "quantile_spread", "std_dev", "gini_mean_difference")


@pytest.mark.parametrize("c", [0.01, 3.0, 250.0])
def test_raw_measures_are_positively_homogeneous(c):
    base_report = spread_analytic(UniformContinuous(T=4.0))
    scaled_report = spread_analytic(UniformContinuous(T=4.0 * c))
    for name in MEASURES:
        assert getattr(scaled_report, name) == pytest.approx(c * getattr(base_report, name), rel=1e-12)

    x = sample(PowerOfUniform(a=1.3), 5_000, seed=21)
    plain, scaled = spread_sample(x), spread_sample(c * x)
    for name in MEASURES:
        assert getattr(scaled, name) == pytest.approx(c * getattr(plain, name), rel=1e-9)


@pytest.mark.parametrize("c", [0.01, 3.0, 250.0])
def test_log_measures_ignore_scaling(c):
    x = sample(PowerOfUniform(a=1.3), 5_000, seed=22)
    plain, scaled = spread_sample(x, SpreadScale.LOG), spread_sample(c * x, SpreadScale.LOG)
    for name in MEASURES:
        assert getattr(scaled, name) == pytest.approx(getattr(plain, name), rel=1e-9, abs=1e-12)

    analytic = spread_analytic(UniformContinuous(T=4.0), SpreadScale.LOG)
    analytic_scaled = spread_analytic(UniformContinuous(T=4.0 * c), SpreadScale.LOG)
    for name in MEASURES[1:]:
        assert getattr(analytic_scaled, name) == pytest.approx(getattr(analytic, name), rel=1e-12)
