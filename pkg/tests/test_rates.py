import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from georate.acceptance import grid_legendre
from georate.errors import ConfigError, NumericalError
from georate.increments import Gaussian, PoissonProduct, Rademacher1D, TwoPointAxis, UniformBall, UniformSphereShell
from georate.manifold import Euclidean, Hyperbolic, Sphere
from georate.rates import (
    MEAN_ABS_Z,
    RateProblem,
    grad_psi,
    hess_psi,
    mgf_log_exact,
    psi,
    psi_star,
    rate_k,
    rate_manifold,
    rate_proj,
    rate_proj_argmax,
)
from georate.weights import WeightRow, row_from_seed

RAD = RateProblem(Rademacher1D(1.0))
POI = PoissonProduct(1.0, 1)
LAWS = [Rademacher1D(1.0), UniformSphereShell(1.0, 2), UniformBall(0.5, 3), Gaussian(2), PoissonProduct(1.0, 2)]

# sup_l {l v - E log cosh(l Z)} by root finding on an adaptive-quadrature derivative
# (tests/oracles/compute_oracles.py)
PSI_STAR_RADEMACHER = {
    0.1: 0.00502516876058054,
    0.3: 0.0471610334192143,
    0.5: 0.144264056064435,
    0.7: 0.349636691812292,
}


def _bounded_probe(law, rng, fraction=0.9):
    bound = law.r * MEAN_ABS_Z if law.bounded else 2.0
    v = rng.normal(size=law.dim)
    return v / np.linalg.norm(v) * fraction * bound * rng.random()


def test_psi_gaussian_is_half_square():
    p = RateProblem(Gaussian(1))
    for lam in (0.0, 0.5, -2.0, 4.0):
        assert psi(p, [lam]) == pytest.approx(0.5 * lam * lam, abs=1e-12)


def test_psi_poisson_closed_form():
    p = RateProblem(PoissonProduct(1.0, 2))
    lam = np.array([1.0, 2.0])
    assert psi(p, lam) == pytest.approx(math.exp(0.5) + math.exp(2.0) - 2.0, rel=1e-12)


def test_psi_broadcasts():
    lam = np.linspace(-3, 3, 7)[:, None]
    vals = psi(RAD, lam)
    assert vals.shape == (7,)
    assert vals[3] == 0.0
    assert grad_psi(RAD, lam).shape == (7, 1)
    assert hess_psi(RAD, lam).shape == (7, 1, 1)


def test_psi_rejects_wrong_dimension():
    with pytest.raises(ConfigError):
        psi(RAD, [1.0, 2.0])


def test_gaussian_conjugate():
    res = psi_star(RateProblem(Gaussian(2)), [1.0, 2.0])
    assert res.value == pytest.approx(2.5, abs=1e-12)
    np.testing.assert_allclose(res.argmax, [1.0, 2.0], atol=1e-9)
    assert res.converged and not res.divergent


@pytest.mark.parametrize("v, expected", sorted(PSI_STAR_RADEMACHER.items()))
def test_rademacher_conjugate_against_oracle(v, expected):
    assert psi_star(RAD, [v]).value == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("v", [0.9, -0.9, MEAN_ABS_Z, 3.0])
def test_support_rule_declares_divergence(v):
    res = psi_star(RAD, [v])
    assert res.divergent and res.value == math.inf and res.argmax is None


def test_off_axis_two_point_law_diverges():
    res = psi_star(RateProblem(TwoPointAxis(1.0, dim=2)), [0.1, 0.1])
    assert res.value == math.inf


def test_zero_has_zero_rate_even_with_nonzero_mean():
    res = psi_star(RateProblem(PoissonProduct(1.0, 2)), [0.0, 0.0])
    assert res.value == 0.0
    np.testing.assert_array_equal(res.argmax, [0.0, 0.0])


def test_non_convergence_raises_with_diagnostics():
    with pytest.raises(NumericalError) as info:
        psi_star(RAD, [0.5], max_iter=1, tol=1e-300)
    assert len(info.value.diagnostics["attempts"]) == 4


def test_psi_star_rejects_non_finite():
    with pytest.raises(ConfigError):
        psi_star(RAD, [math.nan])


@pytest.mark.parametrize("law", LAWS, ids=repr)
def test_symmetry(law):
    p = RateProblem(law)
    rng = np.random.default_rng(1)
    lam = rng.uniform(-3, 3, size=(500, law.dim))
    # Poisson values reach e^{4.5}; compare at the precision of the larger value
    scale = np.maximum(1.0, np.abs(psi(p, lam)))
    assert np.max(np.abs(psi(p, lam) - psi(p, -lam)) / scale) <= 1e-12
    v = _bounded_probe(law, rng)
    assert psi_star(p, v).value == pytest.approx(psi_star(p, -v).value, abs=1e-9)


@pytest.mark.parametrize("law", LAWS, ids=repr)
def test_psi_convexity(law):
    p = RateProblem(law)
    rng = np.random.default_rng(2)
    a, b = rng.uniform(-3, 3, size=(2, 1000, law.dim))
    assert np.max(psi(p, 0.5 * (a + b)) - 0.5 * (psi(p, a) + psi(p, b))) <= 1e-10


@pytest.mark.parametrize("law", LAWS, ids=repr)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_fenchel_inequality(law, seed):
    p = RateProblem(law)
    rng = np.random.default_rng(seed)
    v = _bounded_probe(law, rng)
    lam = rng.uniform(-3, 3, size=law.dim)
    res = psi_star(p, v)
    assert res.value >= 0.0
    assert float(lam @ v) <= psi(p, lam) + res.value + 1e-8


@pytest.mark.parametrize("law", LAWS, ids=repr)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_argmax_is_stationary(law, seed):
    p = RateProblem(law)
    v = _bounded_probe(law, np.random.default_rng(seed))
    res = psi_star(p, v)
    np.testing.assert_allclose(grad_psi(p, res.argmax), v, atol=1e-9)


@pytest.mark.parametrize(
    "law, v",
    [
        (Rademacher1D(1.0), 0.45),
        (Rademacher1D(1.0), -0.6),
        (UniformBall(1.0, 1), 0.3),
        (Gaussian(1), 2.5),
        (PoissonProduct(1.0, 1), 1.5),
        (PoissonProduct(1.0, 1), -0.7),
    ],
)
def test_grid_oracle(law, v):
    p = RateProblem(law)
    assert psi_star(p, [v]).value == pytest.approx(grid_legendre(p, [v])[0], abs=1e-4)


def test_poisson_golden_values():
    assert rate_k(POI, 2, [1.0, 2.0]) == pytest.approx(1.79399854598795, abs=1e-9)
    assert 2 * rate_proj(POI, 2, np.array([1.0, 2.0]) / math.sqrt(2)) == pytest.approx(1.86623952063726, abs=1e-9)
    # values printed with four decimals
    assert round(rate_k(POI, 2, [1.0, 2.0]), 4) == 1.7940
    assert round(2 * rate_proj(POI, 2, np.array([1.0, 2.0]) / math.sqrt(2)), 4) == 1.8662


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_diagonal_identity(k, c):
    lhs = rate_k(POI, k, np.full(k, c))
    rhs = k * rate_proj(POI, k, np.full(k, c / math.sqrt(k)))
    assert lhs == pytest.approx(rhs, abs=1e-4)


def test_projection_rate_for_normal_increments(rng):
    for k in (1, 2, 5):
        v = rng.normal(size=k)
        assert rate_proj(Gaussian(1), k, v) == pytest.approx(0.5 * v @ v, abs=1e-8)
        np.testing.assert_allclose(rate_proj_argmax(Gaussian(1), v), v, atol=1e-8)
    assert rate_proj(POI, 3, np.zeros(3)) == 0.0


def test_product_rate_rejects_bad_shapes():
    with pytest.raises(ConfigError):
        rate_k(POI, 2, [1.0])
    with pytest.raises(ConfigError):
        rate_k(PoissonProduct(1.0, 2), 2, [1.0, 1.0])


def test_flat_manifold_rate_is_psi_star():
    law = UniformBall(1.0, 2)
    p = RateProblem(law)
    v = np.array([0.2, -0.3])
    assert rate_manifold(p, Euclidean(2), np.zeros(2), v) == pytest.approx(psi_star(p, v).value, abs=1e-12)
    assert rate_manifold(p, Euclidean(2), np.zeros(2), np.zeros(2)) == 0.0


def test_sphere_rate_beyond_reach_is_infinite():
    S = Sphere(2, 1.0)
    p = RateProblem(UniformSphereShell(1.0, 2))
    far = S.exp(S.origin(), np.array([1.0, 0.0, 0.0]))
    assert rate_manifold(p, S, S.origin(), far) == math.inf
    near = S.exp(S.origin(), np.array([0.3, 0.4, 0.0]))
    assert rate_manifold(p, S, S.origin(), near) == pytest.approx(psi_star(p, [0.3, 0.4]).value, abs=1e-12)


def test_small_sphere_uses_shortest_admissible_preimage():
    # radius 0.1: the point at arc length 0.5 wraps; the short way round has length 2 pi 0.1 - 0.5
    S = Sphere(2, 0.1)
    p = RateProblem(UniformSphereShell(1.0, 2))
    x = S.exp(S.origin(), np.array([0.5, 0.0, 0.0]))
    short = 2 * math.pi * 0.1 - 0.5
    assert rate_manifold(p, S, S.origin(), x) == pytest.approx(psi_star(p, [short, 0.0]).value, abs=1e-10)


def test_antipode_uses_representative():
    S = Sphere(2, 0.2)
    p = RateProblem(UniformSphereShell(1.0, 2))
    val = rate_manifold(p, S, S.origin(), -S.origin())
    assert val == pytest.approx(psi_star(p, [math.pi * 0.2, 0.0]).value, abs=1e-12)


def test_hyperbolic_rate_is_radial():
    H = Hyperbolic(2)
    p = RateProblem(UniformBall(1.0, 2))
    a = rate_manifold(p, H, H.origin(), H.exp(H.origin(), np.array([0.3, 0.0, 0.0])))
    b = rate_manifold(p, H, H.origin(), H.exp(H.origin(), np.array([0.0, -0.3, 0.0])))
    assert a == pytest.approx(b, abs=1e-12)


def test_manifold_rate_needs_bounded_law():
    with pytest.raises(ConfigError):
        rate_manifold(RateProblem(Gaussian(2)), Euclidean(2), np.zeros(2), np.ones(2))


def test_exact_log_mgf_trivia():
    row = row_from_seed(1000, 0)
    law = Rademacher1D(1.0)
    assert mgf_log_exact(row, law, 0.0) == 0.0
    spike = WeightRow(np.eye(50)[0])
    lam = 0.3
    assert mgf_log_exact(spike, law, lam) == pytest.approx(math.log(math.cosh(math.sqrt(50) * lam)) / 50, rel=1e-14)


def test_exact_log_mgf_prefix():
    row = row_from_seed(1000, 4)
    law = Rademacher1D(1.0)
    full = mgf_log_exact(row, law, 0.7, 1)
    quarter = mgf_log_exact(row, law, 0.7, 4)
    head = np.log(np.cosh(math.sqrt(1000) * 0.7 * row.theta[:250])).sum() / 1000
    assert quarter == pytest.approx(head, rel=1e-13)
    assert quarter < full


def test_exact_log_mgf_overflow_is_flagged():
    row = row_from_seed(100, 1)
    assert mgf_log_exact(row, PoissonProduct(1.0, 1), 500.0) == math.inf


@given(seed=st.integers(min_value=0, max_value=10_000), lam=st.floats(min_value=-2, max_value=2))
def test_exact_log_mgf_bounded_by_support(seed, lam):
    # |sum theta_i X_i| <= sqrt(n), so the normalized log-MGF is at most |lam|
    row = row_from_seed(300, seed)
    assume(lam != 0)
    assert mgf_log_exact(row, Rademacher1D(1.0), lam) <= abs(lam) + 1e-12
