import itertools
import json
import math

import numpy as np
import pytest

from georate.errors import ConfigError
from georate.experiments import (
    ExperimentConfig,
    ball_grid,
    censored_bound,
    enumerate_sums,
    exhaustive_interval,
    exhaustive_oracle,
    monte_carlo_tail,
    oracle_agreement,
    resolve_threads,
    run_experiment,
)
from georate.manifold import Sphere
from georate.weights import WeightRow, row_from_seed

# itertools enumeration in tests/oracles/compute_oracles.py
TAIL_16_11 = {0.8: 0.0, 0.3: 0.121307373046875}
TAIL_16_12_AT_08 = 0.00018310546875


def test_exhaustive_trivia():
    assert exhaustive_oracle(row_from_seed(5, 0), -math.inf) == 1.0
    assert exhaustive_oracle(WeightRow(np.array([1.0])), 0.5) == 0.5
    with pytest.raises(ConfigError):
        exhaustive_oracle(row_from_seed(21, 0), 0.0)


@pytest.mark.parametrize("a, expected", sorted(TAIL_16_11.items()))
def test_exhaustive_against_itertools(a, expected):
    assert exhaustive_oracle(row_from_seed(16, 11), a) == expected


def test_exhaustive_nonzero_tail():
    assert exhaustive_oracle(row_from_seed(16, 12), 0.8) == TAIL_16_12_AT_08


def test_tail_is_zero_beyond_l1_norm():
    row = row_from_seed(12, 3)
    reach = np.abs(row.theta).sum() / math.sqrt(12)
    assert exhaustive_oracle(row, reach + 1e-12) == 0.0
    assert exhaustive_oracle(row, reach - 1e-12) == 2.0**-12


def test_enumeration_is_symmetric():
    w = np.sort(enumerate_sums(row_from_seed(10, 1), r=2.0))
    np.testing.assert_allclose(w, -w[::-1], atol=1e-14)


def test_interval_small_case():
    row = WeightRow(np.array([0.6, 0.8]))
    # W = (+-0.6 +- 0.8)/sqrt2
    vals = sorted((a * 0.6 + b * 0.8) / math.sqrt(2) for a, b in itertools.product((-1, 1), repeat=2))
    assert exhaustive_interval(row, vals[1] - 1e-9, vals[2] + 1e-9) == 0.5


@pytest.mark.parametrize("seed, a", [(11, 0.8), (11, 0.3), (12, 0.8), (3, 0.0)])
def test_monte_carlo_agrees_with_enumeration(seed, a):
    row = row_from_seed(16, seed)
    exact = exhaustive_oracle(row, a)
    mc = monte_carlo_tail(row, a, 100_000, seed)
    agree, se, z = oracle_agreement(exact, mc["hits"], mc["trials"])
    assert agree, (exact, mc, z)


def test_monte_carlo_is_reproducible():
    row = row_from_seed(16, 1)
    assert monte_carlo_tail(row, 0.2, 25_000, 5) == monte_carlo_tail(row, 0.2, 25_000, 5)


def test_oracle_agreement_degenerate():
    assert oracle_agreement(0.0, 0, 10)[0]
    assert not oracle_agreement(0.0, 1, 10)[0]


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="nope")
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="corollary_sweep", trials=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="corollary_sweep", lambdas=[math.inf])
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"experiment": "corollary_sweep", "colour": 1})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"law": "shell:1"})
    cfg = ExperimentConfig.from_dict({"experiment": "corollary_sweep", "n": 100})
    assert cfg.n == [100]


def test_thread_resolution(monkeypatch):
    monkeypatch.delenv("GEORATE_THREADS", raising=False)
    assert resolve_threads() == 1
    monkeypatch.setenv("GEORATE_THREADS", "3")
    assert resolve_threads() == 3
    assert resolve_threads(2) == 2
    monkeypatch.setenv("GEORATE_THREADS", "many")
    with pytest.raises(ConfigError):
        resolve_threads()
    with pytest.raises(ConfigError):
        resolve_threads(0)


def _sweep(**kw):
    base = dict(experiment="corollary_sweep", law="rademacher:1", n=[1000, 10_000], trials=4, lambdas=[0.0, 0.7], ks=[1, 4])
    base.update(kw)
    return run_experiment(base)


def test_corollary_zero_probe_rows():
    res = _sweep()
    zero = [r for r in res.rows if r["lambda"] == "0"]
    assert zero and all(r["abs_err"] == 0.0 for r in zero)
    assert len(res.rows) == 2 * 4 * 2 * 2


def test_corollary_prefix_rows_differ():
    res = _sweep()
    k1 = [r for r in res.rows if r["lambda"] == "0.7" and r["k"] == 1]
    k4 = [r for r in res.rows if r["lambda"] == "0.7" and r["k"] == 4]
    for a, b in zip(k1, k4):
        assert a["seed"] == b["seed"]
        assert a["psi_over_k"] == pytest.approx(4 * b["psi_over_k"])
        assert a["exact_log_mgf"] != b["exact_log_mgf"]


def test_corollary_is_thread_invariant():
    a, b = _sweep(threads=1), _sweep(threads=4)
    assert a.rows == b.rows


def test_corollary_rows_rerun_from_seed():
    res = _sweep()
    from georate.experiments import corollary_rows
    from georate.increments import Rademacher1D
    from georate.rates import RateProblem, psi

    row = res.rows[-1]
    master, n, trial = (int(s) for s in row["seed"].split(":"))
    targets = {"0.7": psi(RateProblem(Rademacher1D(1.0)), [0.7])}
    again = corollary_rows(Rademacher1D(1.0), n, master, trial, [np.array([0.7])], [4], targets)
    assert again[0]["exact_log_mgf"] == row["exact_log_mgf"]


def test_corollary_overflow_rows_are_kept():
    res = run_experiment(dict(experiment="corollary_sweep", law="poisson1", manifold="euclidean:1", n=[100], trials=2, lambdas=[1e4]))
    assert len(res.rows) == 2
    assert all(r["overflow"] for r in res.rows)
    assert not res.summary["criteria"]["no_overflow"]


def test_corollary_sweep_converges():
    res = run_experiment(
        dict(
            experiment="corollary_sweep",
            law="rademacher:1",
            n=[1000, 10_000, 100_000],
            trials=20,
            lambdas=[0.7],
            master_seed=8,
        )
    )
    errs = res.summary["max_errors"]
    assert errs["n=100000"] <= 0.02
    assert errs["n=100000"] < errs["n=1000"]
    assert res.summary["passed"]


def test_discrepancy_flat_control():
    res = run_experiment(dict(experiment="discrepancy_scaling", manifold="euclidean:2", law="shell:1", n=[300], trials=10))
    assert all(r["median_discrepancy"] <= 1e-12 for r in res.rows)
    assert res.summary["criteria"] == {"flat_exact": True}


def test_discrepancy_on_sphere():
    res = run_experiment(
        dict(experiment="discrepancy_scaling", manifold="sphere:2:1", law="shell:1", n=[500], trials=60, ls=[1, 500])
    )
    first = [r for r in res.rows if r["l"] == 1]
    assert all(r["max_discrepancy"] <= 1e-12 for r in first)
    med = [r["median_discrepancy"] for r in res.rows if r["l"] == 500]
    assert med[0] > med[1] > med[2]
    assert res.summary["passed"]
    assert res.summary["fit"]["C_ls"] > 0


def test_ball_trend_matches_reference():
    # Rademacher on the line, n = 16: moving the ball outward raises both rates
    def run(c):
        return run_experiment(
            dict(experiment="ball_probability", law="rademacher:1", manifold="euclidean:1", n=[16], center=[c], radius=0.05, exact=True, master_seed=5)
        ).rows[0]

    near, far = run(0.4), run(0.6)
    assert near["method"] == "enumeration"
    assert far["empirical_rate"] > near["empirical_rate"]
    assert far["reference_rate"] > near["reference_rate"]


def test_ball_containing_start():
    res = run_experiment(
        dict(experiment="ball_probability", law="shell:1", manifold="sphere:2:1", n=[20], trials=200, center=[0, 0, 1], radius=0.5, grid=5)
    )
    row = res.rows[0]
    assert row["reference_rate"] == 0.0
    assert row["hits"] > 0 and not row["censored"]
    assert 0.0 <= row["empirical_rate"] < censored_bound(20, 200)


def test_ball_out_of_reach_is_censored():
    S = Sphere(2, 1.0)
    center = S.exp(S.origin(), np.array([1.2, 0.0, 0.0]))
    res = run_experiment(
        dict(experiment="ball_probability", law="shell:1", manifold="sphere:2:1", n=[30], trials=300, center=center.tolist(), radius=0.1, grid=5)
    )
    row = res.rows[0]
    assert row["reference_rate"] == math.inf
    assert row["hits"] == 0 and row["censored"]
    assert row["empirical_rate"] is None
    assert row["rate_lower_bound"] == pytest.approx(censored_bound(30, 300))


def test_ball_grid_stays_in_ball():
    S = Sphere(2, 1.0)
    c = S.exp(S.origin(), np.array([0.3, 0.2, 0.0]))
    pts = ball_grid(S, c, 0.1, 9)
    assert np.all(S.distance(c[None, :], pts) <= 0.1 + 1e-12)


def test_outputs_written(tmp_path):
    res = _sweep(output=str(tmp_path / "sweep"))
    csv_text = (tmp_path / "sweep.csv").read_text()
    assert csv_text.splitlines()[0] == "n,seed,lambda,k,exact_log_mgf,psi_over_k,abs_err,overflow"
    summary = json.loads((tmp_path / "sweep.json").read_text())
    assert summary["config"]["n"] == [1000, 10_000]
    assert summary["experiment"] == "corollary_sweep"
    assert set(summary["criteria"]) == set(res.summary["criteria"])
