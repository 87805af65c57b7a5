"""Acceptance suite: each criterion is a function returning a :class:`Criterion`.

``run_all`` executes them in order; the CLI ``verify`` verb and
``tests/test_acceptance.py`` both go through it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .experiments import (
    ExperimentConfig,
    corollary_sweep,
    discrepancy_scaling,
    exhaustive_oracle,
    monte_carlo_tail,
    oracle_agreement,
)
from .increments import Gaussian, PoissonProduct, Rademacher1D, UniformBall, UniformSphereShell
from .manifold import Euclidean, Hyperbolic, Sphere
from .rates import RateProblem, psi, psi_star, rate_k, rate_proj
from .walk import Partition, lemma_slack, lower_pieces, piece_slack, reconstruct_lower, run_walks, tangent_discrepancy
from .weights import row_from_seed

VERIFY_BUDGET_SECONDS = 300.0


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0
    # wall-clock notes, kept out of ``detail`` so reports stay reproducible
    timing: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; {self.timing}" if self.timing else ""
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.elapsed:.2f}s{extra})"


def _timed(number, name, fn) -> Criterion:
    t0 = time.perf_counter()
    passed, detail, *timing = fn()
    return Criterion(number, name, bool(passed), detail, time.perf_counter() - t0, timing[0] if timing else "")


def poisson_golden():
    poi = PoissonProduct(1.0, 1)
    t0 = time.perf_counter()
    ik = rate_k(poi, 2, [1.0, 2.0])
    t_k = time.perf_counter() - t0
    t0 = time.perf_counter()
    ip = 2.0 * rate_proj(poi, 2, np.array([1.0, 2.0]) / math.sqrt(2.0))
    t_p = time.perf_counter() - t0
    ok = abs(ik - 1.7940) <= 0.005 and abs(ip - 1.8662) <= 0.005 and t_k < 1.0 and t_p < 1.0
    return ok, f"I_2={ik:.6f} 2*I_proj={ip:.6f}", f"evaluations {t_k:.3f}s/{t_p:.3f}s"


def normal_closed_form(seed: int = 101):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for dim in (1, 2, 3):
        p = RateProblem(Gaussian(dim))
        for _ in range(20):
            direction = rng.standard_normal(dim)
            v = direction / np.linalg.norm(direction) * 3.0 * rng.random()
            exact = 0.5 * float(v @ v)
            worst = max(worst, abs(psi_star(p, v).value - exact), abs(rate_proj(Gaussian(1), dim, v) - exact))
    return worst <= 1e-6, f"max error {worst:.3g}"


def diagonal_identity():
    poi = PoissonProduct(1.0, 1)
    worst = 0.0
    for k in (2, 3):
        for c in (0.5, 1.0, 2.0):
            lhs = rate_k(poi, k, np.full(k, c))
            rhs = k * rate_proj(poi, k, np.full(k, c / math.sqrt(k)))
            worst = max(worst, abs(lhs - rhs))
    return worst <= 1e-4, f"max |I_k - k I_proj| {worst:.3g}"


def corollary_convergence(threads: int | None = None):
    cfg = ExperimentConfig(
        experiment="corollary_sweep",
        name="corollary",
        law="rademacher:1",
        n=[1000, 100_000],
        trials=20,
        master_seed=20240,
        lambdas=[0.3, 0.7, 1.0],
        ks=[1, 4],
        tolerance=0.02,
        threads=threads,
    )
    res = corollary_sweep(cfg)
    crit = res.summary["criteria"]
    errs = res.summary["max_errors"]
    ok = crit["within_tolerance_at_largest_n"] and crit["error_decreases_in_n"]
    return ok, f"max err n=1e3 {errs['n=1000']:.4g}, n=1e5 {errs['n=100000']:.4g}"


def lemma_bounds(paths_per_manifold: int = 1000, n: int = 1000, m: int = 16):
    law = UniformSphereShell(1.0, 2)
    worst = math.inf
    for k, manifold in enumerate((Sphere(2, 1.0), Hyperbolic(2))):
        paths = run_walks(manifold, law, n, manifold.origin(), 7100 + k, paths_per_manifold)
        part = Partition(n, m)
        for path in paths:
            worst = min(worst, lemma_slack(path), piece_slack(path, part))
    return worst >= -1e-10, f"min slack {worst:.4g} over {2 * paths_per_manifold} paths"


def reconstruction_identity(paths: int = 100, n: int = 1024, m: int = 16):
    part = Partition(n, m)
    out = {}
    for k, manifold in enumerate((Sphere(2, 1.0), Euclidean(2))):
        x0 = manifold.origin()
        worst = 0.0
        for path in run_walks(manifold, UniformSphereShell(1.0, 2), n, x0, 7200 + k, paths):
            v = manifold.log(x0, path.endpoint)
            y = reconstruct_lower(manifold, x0, v, lower_pieces(path, part, v))
            worst = max(worst, float(manifold.distance(y, path.endpoint)))
        out[type(manifold).__name__] = worst
    ok = out["Sphere"] <= 1e-8 and out["Euclidean"] <= 1e-12
    return ok, f"sphere {out['Sphere']:.3g}, flat {out['Euclidean']:.3g}"


def flat_exactness(paths: int = 100, n: int = 1000):
    manifold = Euclidean(2)
    worst = 0.0
    for path in run_walks(manifold, UniformBall(1.0, 2), n, manifold.origin(), 7300, paths):
        worst = max(worst, float(np.max(tangent_discrepancy(path))))
    return worst <= 1e-12, f"max discrepancy {worst:.3g}"


def discrepancy_scaling_check(threads: int | None = None):
    cfg = ExperimentConfig(
        experiment="discrepancy_scaling",
        name="discrepancy",
        manifold="sphere:2:1",
        law="shell:1",
        n=[1000],
        trials=200,
        master_seed=7400,
        scales=[1.0, 0.5, 0.25],
        threads=threads,
    )
    res = discrepancy_scaling(cfg)
    fit = res.summary["fit"]
    crit = res.summary["criteria"]
    meds = ", ".join(f"{v:.3g}" for v in fit["medians_at_l_max"].values())
    ok = crit["median_strictly_decreasing"] and crit["bound_coverage"]
    return ok, f"medians [{meds}], C_bound {fit['C_bound']:.3g} covers {fit['coverage']:.3f}"


def oracle_equivalence(seeds=range(11, 20), n: int = 16, a: float = 0.8, trials: int = 100_000):
    parts = []
    ok = True
    for seed in seeds:
        row = row_from_seed(n, seed)
        exact = exhaustive_oracle(row, a)
        mc = monte_carlo_tail(row, a, trials, seed)
        agree, _, z = oracle_agreement(exact, mc["hits"], trials)
        ok &= agree
        parts.append(f"{seed}:{exact:.3g}/{mc['p']:.3g}(z={z:.2f})")
    return ok, "seed:exact/mc " + " ".join(parts)


# -- property suites -----------------------------------------------------------


def _manifold_properties(rng):
    worst_iso = worst_trip = 0.0
    for manifold in (Sphere(2, 1.0), Sphere(3, 2.0), Hyperbolic(2), Hyperbolic(3)):
        for _ in range(200):
            x = manifold.random_point(rng)
            y = manifold.random_point(rng)
            u = manifold.random_tangent(rng, x)
            w = manifold.random_tangent(rng, x)
            tu, tw = manifold.transport(x, y, u), manifold.transport(x, y, w)
            worst_iso = max(
                worst_iso,
                abs(float(manifold.norm(y, tu) - manifold.norm(x, u))),
                abs(float(manifold.inner(y, tu, tw) - manifold.inner(x, u, w))),
            )
            limit = min(0.9 * manifold.injectivity_radius(), 3.0)
            v = u / float(manifold.norm(x, u)) * limit * rng.random()
            worst_trip = max(worst_trip, float(np.max(np.abs(manifold.log_min(x, manifold.exp(x, v)) - v))))
    return worst_iso, worst_trip


_PROPERTY_LAWS = [
    Rademacher1D(1.0),
    UniformSphereShell(1.0, 2),
    UniformBall(0.5, 3),
    Gaussian(2),
    PoissonProduct(1.0, 2),
]


def _psi_properties(rng):
    sym = convex = zero = fenchel = 0.0
    for law in _PROPERTY_LAWS:
        p = RateProblem(law)
        lam = rng.uniform(-3, 3, size=(1000, law.dim))
        sym = max(sym, float(np.max(np.abs(psi(p, lam) - psi(p, -lam)))))
        other = rng.uniform(-3, 3, size=(1000, law.dim))
        mid = psi(p, 0.5 * (lam + other))
        convex = max(convex, float(np.max(mid - 0.5 * (psi(p, lam) + psi(p, other)))))
        res0 = psi_star(p, np.zeros(law.dim))
        zero = max(zero, abs(res0.value), float(np.max(np.abs(res0.argmax))))
        bound = law.r * math.sqrt(2 / math.pi) if law.bounded else 2.0
        for _ in range(20):
            v = rng.uniform(-1, 1, size=law.dim)
            v *= 0.9 * bound * rng.random() / max(np.linalg.norm(v), 1e-12)
            star = psi_star(p, v).value
            lam1 = rng.uniform(-2, 2, size=law.dim)
            fenchel = max(fenchel, float(lam1 @ v - psi(p, lam1) - star))
    return sym, convex, zero, fenchel


def grid_legendre(p: RateProblem, vs, step: float = 1e-3, span: float = 20.0) -> np.ndarray:
    """Dense-grid Legendre transform in one dimension, one value per entry of ``vs``."""
    grid = np.arange(-span, span + step / 2, step)
    vals = psi(p, grid[:, None])
    with np.errstate(invalid="ignore"):
        obj = np.outer(np.atleast_1d(vs), grid) - vals
    return np.nanmax(obj, axis=1)


_GRID_CASES = [
    (Rademacher1D(1.0), (0.1, 0.3, -0.5, 0.6)),
    (UniformBall(1.0, 1), (0.1, 0.3, -0.45)),
    (Gaussian(1), (0.5, -2.0, 3.0)),
    (PoissonProduct(1.0, 1), (0.5, -1.0, 2.0)),
]


def _grid_oracle():
    worst = 0.0
    for law, vs in _GRID_CASES:
        p = RateProblem(law)
        oracle = grid_legendre(p, vs)
        for v, ref in zip(vs, oracle):
            worst = max(worst, abs(psi_star(p, [v]).value - ref))
    return worst


def property_suites(seed: int = 7500):
    rng = np.random.default_rng(seed)
    iso, trip = _manifold_properties(rng)
    sym, convex, zero, fenchel = _psi_properties(rng)
    grid = _grid_oracle()
    checks = {
        "transport isometry": (iso, 1e-12),
        "exp/log round trip": (trip, 1e-9),
        "psi symmetry": (sym, 1e-12),
        "psi convexity": (convex, 1e-10),
        "psi_star(0)=0": (zero, 0.0),
        "fenchel": (fenchel, 1e-8),
        "grid oracle": (grid, 1e-4),
    }
    ok = all(val <= tol for val, tol in checks.values())
    detail = ", ".join(f"{k} {val:.2g}" for k, (val, _) in checks.items())
    return ok, detail


CRITERIA = [
    (1, "poisson golden values", poisson_golden),
    (2, "normal closed form", normal_closed_form),
    (3, "diagonal identity", diagonal_identity),
    (4, "corollary convergence", corollary_convergence),
    (5, "lemma bounds", lemma_bounds),
    (6, "reconstruction identity", reconstruction_identity),
    (7, "flat exactness", flat_exactness),
    (8, "discrepancy scaling", discrepancy_scaling_check),
    (9, "oracle equivalence", oracle_equivalence),
    (10, "property suites", property_suites),
]


def run_all(only=None, echo=None) -> list[Criterion]:
    """Run the criteria (or those numbered in ``only``); ``echo`` receives each line.

    Criterion 10 also requires the whole run to finish within
    ``VERIFY_BUDGET_SECONDS``.
    """
    t0 = time.perf_counter()
    results = []
    for number, name, fn in CRITERIA:
        if only is not None and number not in only:
            continue
        res = _timed(number, name, fn)
        if number == 10:
            total = time.perf_counter() - t0
            res.passed = res.passed and total < VERIFY_BUDGET_SECONDS
            res.timing = f"verify run {total:.1f}s"
        results.append(res)
        if echo is not None:
            echo(res.line())
    return results
