import math

import numpy as np
import pytest
from scipy import stats

from src.errors import DomainError
from src.services.digits import benford_pmf_vector
from src.services.metrics import (
    _zero,
    chisq_from_counts,
    distance_report,
    dkw_bound,
    empirical_ks,
    first_digit_chisq,
    first_digit_counts,
    first_digit_frequencies,
    ks_distance,
    wasserstein_distance,
)
from src.services.modone import (
    BenfordDecade,
    Piece,
    PowerOfUniform,
    atoms_cdf,
    log_mod_one,
    sample,
    uniform_cdf,
    uniform_phase_cdf,
)

LN10 = math.log(10.0)


def _midpoint_wasserstein(cdf, n=1_000_000):
    s = (np.arange(n) + 0.5) / n
    return float(np.mean(np.abs(cdf.evaluate(s) - s)))


def test_ks_of_full_decades():
    result = ks_distance(uniform_phase_cdf(0.0))
    expected = 1 / 9 + math.log10(9 / LN10) - 1 / LN10
    assert result.value == pytest.approx(expected, abs=1e-12)
    assert result.value == pytest.approx(0.268843, abs=1e-6)
    assert result.argmax == pytest.approx(math.log10(9 / LN10), abs=1e-12)


def test_wasserstein_of_full_decades():
    assert wasserstein_distance(uniform_phase_cdf(0.0)) == pytest.approx(0.5 + 1 / 9 - 1 / LN10, abs=1e-12)


def test_uniform_reference_is_at_distance_zero():
    report = distance_report(uniform_cdf())
    assert report.ks == 0.0
    assert report.wasserstein == 0.0


def test_power_of_three_halves():
    report = distance_report(log_mod_one(PowerOfUniform(a=1.5)))
    assert report.ks == pytest.approx(1 / 6, abs=1e-12)
    assert report.argmax_s == pytest.approx(0.5, abs=1e-12)
    assert report.wasserstein == pytest.approx(1 / 12, abs=1e-12)


def test_distance_report_json_uses_ks_argmax():
    payload = distance_report(uniform_phase_cdf(0.3)).to_json_dict()
    assert set(payload) == {"ks", "ks_argmax", "wasserstein"}


def test_base_two_reading_of_decimal_benford():
    result = ks_distance(log_mod_one(PowerOfUniform(a=1.0, base=10), 2))
    phase = math.log2(10.0) % 1.0
    assert result.value == pytest.approx((4 * math.log10(2.0) - 1.0) * phase, abs=1e-12)
    assert result.value == pytest.approx(0.06572, abs=1e-5)
    assert result.argmax == pytest.approx(phase, abs=1e-9)


def test_step_cdf_distance():
    result = ks_distance(atoms_cdf([0.5], [1.0]))
    assert result.value == pytest.approx(0.5, abs=1e-15)
    assert result.argmax == 0.5


@pytest.mark.parametrize("theta", [0.05, 0.3, 0.5, 0.77, 0.99])
def test_wasserstein_matches_quadrature(theta):
    cdf = uniform_phase_cdf(theta)
    assert wasserstein_distance(cdf) == pytest.approx(_midpoint_wasserstein(cdf), abs=1e-9)


def test_wasserstein_never_exceeds_ks():
    for theta in np.linspace(0.0, 0.99, 34):
        report = distance_report(uniform_phase_cdf(theta))
        assert report.wasserstein <= report.ks + 1e-15


def test_dkw_bound():
    assert dkw_bound(10 ** 6) == pytest.approx(math.sqrt(math.log(200.0) / 2e6))
    assert dkw_bound(100, 0.999) > dkw_bound(100, 0.99)


def test_empirical_ks_single_digit_data():
    values = [7, 70, 700, 7000]
    assert empirical_ks(values) == pytest.approx(math.log10(7.0), abs=1e-12)
    chi = first_digit_chisq(values)
    assert chi.dof == 8
    assert chi.statistic > 60.0
    np.testing.assert_array_equal(first_digit_counts(values), [0, 0, 0, 0, 0, 0, 4, 0, 0])


def test_empirical_ks_of_benford_samples():
    n = 100_000
    draws = sample(BenfordDecade(k=0), n, seed=11)
    assert empirical_ks(draws) <= dkw_bound(n)
    freqs = first_digit_frequencies(draws)
    assert freqs.sum() == pytest.approx(1.0)
    assert freqs[0] == pytest.approx(math.log10(2.0), abs=0.01)


def test_empirical_ks_rejects_non_positive():
    with pytest.raises(DomainError) as info:
        empirical_ks([1.0, 0.0])
    assert info.value.index == 1


def test_chisq_of_exactly_proportional_counts():
    chi = chisq_from_counts(1_000.0 * benford_pmf_vector(10), 10)
    assert chi.statistic == pytest.approx(0.0, abs=1e-12)
    assert chi.dof == 8


def test_chisq_of_benford_samples_stays_below_the_tail_quantile():
    draws = sample(BenfordDecade(k=0), 100_000, seed=12)
    assert first_digit_chisq(draws).statistic < stats.chi2.ppf(0.999, 8)


def test_empirical_ks_of_empty_sample():
    with pytest.raises(DomainError):
        empirical_ks([])


def test_zero_on_a_monotone_piece():
    # 10**s - s + c3 vanishes at s = 0.4
    piece = Piece(c1=1.0, c2=0.0, c3=0.4 - 10.0 ** 0.4)
    assert _zero(piece, 10, 0.0, 1.0) == pytest.approx(0.4, abs=1e-12)


def test_zero_when_the_exponential_term_dominates():
    piece = Piece(c1=1e200, c2=0.0, c3=-1e200 * 10.0 ** 0.5)
    assert _zero(piece, 10, 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)
