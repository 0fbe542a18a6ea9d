import math
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from src.errors import DomainError
from src.services import audit
from src.services.metrics import ks_distance
from src.services.modone import PowerOfUniform, UniformContinuous, log_mod_one
from src.services.spread import SpreadScale

BOUND = 0.134422


@pytest.fixture(scope="module")
def curve():
    return audit.prop1_curve(10, 10_000)


def test_closed_form_bound():
    bound = audit.prop1_bound(10)
    assert bound == pytest.approx(BOUND, abs=1e-6)
    assert 0.0 < bound < 0.5
    # the printed decimal disagrees with the closed form by about 1e-3
    assert abs(bound - audit.PRINTED_BOUND_DECIMAL) > 5e-4


def test_bound_is_half_the_full_decade_distance():
    ln10 = math.log(10.0)
    full_decades = 1 / 9 + math.log10(9 / ln10) - 1 / ln10
    assert audit.prop1_bound(10) == pytest.approx(full_decades / 2, abs=1e-12)


def test_independent_minimization_agrees_with_closed_form():
    minimum = audit.minimize_over_phase(10, grid_size=1024)
    assert minimum.value == pytest.approx(audit.prop1_bound(10), abs=1e-6)
    assert 0.0 <= minimum.theta < 1.0


def test_curve_is_bounded_below_everywhere(curve):
    assert len(curve.thetas) == 10_000
    assert min(curve.distances) >= curve.bound - 1e-9
    assert curve.residual <= 1e-6
    assert curve.bound_source == "closed_form"
    assert curve.distances[0] == pytest.approx(0.268843, abs=1e-6)
    assert audit.phase_distance(curve.theta_star) == pytest.approx(curve.d_star, abs=1e-12)


def test_wasserstein_curve_is_reported(curve):
    assert len(curve.wasserstein) == len(curve.thetas)
    assert 0.0 < curve.w_star <= min(curve.wasserstein) + 1e-12
    assert all(w <= d + 1e-15 for w, d in zip(curve.wasserstein, curve.distances))


def test_grid_size_floor():
    with pytest.raises(DomainError):
        audit.prop1_curve(10, 8)


def test_periodicity_in_decades():
    rng = np.random.default_rng(0)
    for T in 10.0 ** rng.uniform(-3.0, 3.0, size=100):
        d = ks_distance(log_mod_one(UniformContinuous(T=T))).value
        d10 = ks_distance(log_mod_one(UniformContinuous(T=10.0 * T))).value
        assert d == pytest.approx(d10, abs=1e-12)
    assert audit.phase_distance(0.3) == pytest.approx(audit.phase_distance(1.3), abs=1e-12)


def test_other_base_bound_is_numerical():
    curve = audit.prop1_curve(2, 512)
    assert curve.bound_source == "numerical"
    assert curve.bound == curve.d_star
    assert 0.0 < curve.bound < audit.prop1_bound(10)


def test_large_spread_keeps_distance():
    rows = audit.large_spread_sequence([0, 1, 2, 5, 8], theta=0.1)
    assert [r.raw_range for r in rows] == sorted(r.raw_range for r in rows)
    for row in rows:
        assert row.ks == pytest.approx(rows[0].ks, abs=1e-9)
        assert row.ks >= audit.prop1_bound(10) - 1e-9


def test_leading_one_fraction():
    assert audit.leading_one_fraction(1) == Fraction(11, 20)
    assert audit.leading_one_fraction(0) == Fraction(1, 2)
    values = [audit.leading_one_fraction(n) for n in range(1, 13)]
    assert all(v > Fraction(1, 2) for v in values)
    assert values == sorted(values)
    assert abs(float(values[-1]) - 5 / 9) < 1e-9
    assert audit.leading_one_fraction(3, base=2) == 1
    with pytest.raises(DomainError):
        audit.leading_one_fraction(-1)


def test_leading_one_fraction_matches_enumeration():
    for n in range(0, 4):
        population = range(1, 2 * 10 ** n + 1)
        ones = sum(1 for x in population if str(x)[0] == "1")
        assert audit.leading_one_fraction(n) == Fraction(ones, 2 * 10 ** n)


def test_counterexamples_report():
    rows = audit.counterexamples_report(3)
    assert [r.n for r in rows] == [0, 1, 2, 3]
    assert rows[1].fraction == "11/20"
    assert rows[1].value == pytest.approx(0.55)
    assert rows[1].benford_pmf_1 == pytest.approx(0.30103, abs=1e-5)


def test_nonmonotonicity():
    report = audit.nonmonotonicity_report()
    assert report.distance_x.ks == 0.0
    assert report.distance_z.ks == pytest.approx(1 / 6, abs=1e-12)
    assert len(report.rows) == 8
    assert all(row.z_exceeds_x for row in report.rows)

    table = {(r.measure, r.scale): r for r in report.rows}
    assert table[("range", SpreadScale.LOG)].x_value == pytest.approx(1.0)
    assert table[("range", SpreadScale.LOG)].z_value == pytest.approx(1.5)
    assert table[("range", SpreadScale.RAW)].x_value == pytest.approx(9.0)
    assert table[("range", SpreadScale.RAW)].z_value == pytest.approx(30.6228, abs=1e-4)


def test_base_change():
    rows = audit.base_change_audit(PowerOfUniform(a=1.0, base=10), [10, 2])
    assert rows[0].distance.ks == 0.0
    assert rows[1].distance.ks == pytest.approx(0.06572, abs=1e-5)
    assert rows[1].distance.argmax_s == pytest.approx(math.log2(10.0) % 1.0, abs=1e-9)
    assert rows[0].log_spread_ratio == pytest.approx(1.0)
    assert rows[1].log_spread_ratio == pytest.approx(math.log2(10.0), abs=1e-12)


def test_benford_variables_fail_on_log_scale():
    for k in (1, 5, 10):
        assert audit.log_of_benford_audit(k).ks > 0.01
        assert audit.benford_decade_distance(k).ks == 0.0
    assert audit.log_of_benford_audit(1).ks == pytest.approx(1.0 - math.log10(2.0), abs=1e-12)
    assert audit.log_of_benford_audit(10).ks == pytest.approx(1.0 - math.log10(1.1), abs=1e-12)


@pytest.mark.parametrize("k", [0, -2])
def test_benford_log_rejects_small_decades(k):
    with pytest.raises(DomainError):
        audit.log_of_benford_audit(k)


def test_csv_writers(tmp_path):
    curve = audit.prop1_curve(10, 64)
    path = tmp_path / "curve.csv"
    audit.write_curve_csv(curve, path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["theta", "D", "W"]
    assert len(frame) == 64
    assert b"\r\n" not in path.read_bytes()

    table = tmp_path / "nonmonotonicity.csv"
    audit.write_nonmonotonicity_csv(audit.nonmonotonicity_report(), table)
    assert list(pd.read_csv(table).columns) == ["measure", "scale", "X_value", "Z_value", "ks_X", "ks_Z"]
