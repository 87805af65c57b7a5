import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from georate.errors import ConfigError
from georate.weights import (
    WeightRow,
    is_atypical,
    max_weight_threshold,
    read_rows_csv,
    row_from_seed,
    sample_row,
    scale,
    write_rows_csv,
)


@given(n=st.integers(min_value=1, max_value=5000), seed=st.integers(min_value=0, max_value=2**31))
def test_rows_are_unit_vectors_with_prefix_bound(n, seed):
    row = row_from_seed(n, seed)
    assert row.n == n
    assert abs(np.linalg.norm(row.theta) - 1.0) <= 1e-12
    k = np.arange(1, n + 1)
    assert np.all(row.prefix_l1() <= np.sqrt(k) * (1 + 1e-12))


def test_same_seed_same_row():
    a, b = row_from_seed(100, 5), row_from_seed(100, 5)
    assert a.theta.tobytes() == b.theta.tobytes()
    assert not np.array_equal(a.theta, row_from_seed(100, 6).theta)


def test_rows_are_read_only():
    row = row_from_seed(10, 1)
    with pytest.raises(ValueError):
        row.theta[0] = 1.0


def test_scaled_weights():
    row = WeightRow(np.array([0.6, 0.8]))
    np.testing.assert_allclose(scale(row), [0.6 / math.sqrt(2), 0.8 / math.sqrt(2)])
    np.testing.assert_allclose(row.scaled(), scale(row))


def test_coordinates_look_gaussian():
    # sqrt(n) theta_i is close to N(0, 1) for a uniform point on the sphere
    row = row_from_seed(200_000, 3)
    z = math.sqrt(row.n) * row.theta
    assert abs(z.mean()) < 0.01
    assert abs(z.var() - 1.0) < 0.01
    assert abs(np.mean(np.abs(z)) - math.sqrt(2 / math.pi)) < 0.01


def test_atypical_flag():
    assert max_weight_threshold(100_000) == pytest.approx(0.0682, abs=1e-4)
    assert not is_atypical(row_from_seed(100_000, 0))
    spike = WeightRow.normalized(np.r_[100.0, np.ones(9999)])
    assert is_atypical(spike)


def test_rejects_bad_rows():
    with pytest.raises(ConfigError):
        WeightRow(np.array([1.0, 1.0]))
    with pytest.raises(ConfigError):
        WeightRow(np.array([]))
    with pytest.raises(ConfigError):
        sample_row(0, np.random.default_rng(0))


def test_csv_round_trip(tmp_path):
    rows = [row_from_seed(7, s) for s in range(3)]
    write_rows_csv(tmp_path / "rows.csv", rows)
    back = read_rows_csv(tmp_path / "rows.csv")
    for a, b in zip(rows, back):
        np.testing.assert_allclose(a.theta, b.theta, rtol=0, atol=1e-16)


def test_csv_reports_bad_line(tmp_path):
    p = tmp_path / "rows.csv"
    p.write_text("0.6,0.8\n0.1,abc\n")
    with pytest.raises(ConfigError, match=":2:"):
        read_rows_csv(p)
