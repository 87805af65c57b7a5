"""Independent reference values frozen into the test suite.

Run ``python3 tests/oracles/compute_oracles.py``. Nothing here imports the
package: expectations use adaptive quadrature, Legendre transforms use
bracketing root finding, and tail probabilities use itertools enumeration
over a weight row rebuilt from the same generator recipe.
"""

import itertools
import math

import numpy as np
from scipy import integrate, optimize


def normal_expect(f):
    g = lambda z: f(z) * math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
    val, _ = integrate.quad(g, -40, 40, points=[0.0], limit=500, epsabs=1e-14, epsrel=1e-13)
    return val


def log_cosh(t):
    a = abs(t)
    return a + math.log1p(math.exp(-2 * a)) - math.log(2)


def psi_rademacher(lam):
    return normal_expect(lambda z: log_cosh(z * lam))


def dpsi_rademacher(lam):
    return normal_expect(lambda z: z * math.tanh(z * lam))


def psi_star_rademacher(v):
    lam = optimize.brentq(lambda t: dpsi_rademacher(t) - v, 0.0, 200.0, xtol=1e-14)
    return lam * v - psi_rademacher(lam), lam


def psi_uniform_interval(lam):
    # uniform on [-1, 1]: log(sinh t / t)
    def lm(t):
        a = abs(t)
        if a < 1e-6:
            return a * a / 6
        return a + math.log1p(-math.exp(-2 * a)) - math.log(2 * a)

    return normal_expect(lambda z: lm(z * lam))


def row(n, seed):
    # same recipe as the package: standard normal vector, normalized
    g = np.random.default_rng(seed).standard_normal(n)
    return g / np.linalg.norm(g)


def tail_enumerated(theta, a, r=1.0):
    n = len(theta)
    hits = 0
    for signs in itertools.product((-1.0, 1.0), repeat=n):
        if float(np.dot(signs, theta)) * r / math.sqrt(n) >= a:
            hits += 1
    return hits / 2**n


def interval_enumerated(theta, lo, hi):
    n = len(theta)
    hits = 0
    for signs in itertools.product((-1.0, 1.0), repeat=n):
        w = float(np.dot(signs, theta)) / math.sqrt(n)
        hits += lo <= w <= hi
    return hits / 2**n


if __name__ == "__main__":
    for lam in (0.3, 0.7, 1.0, 2.0, 5.0):
        print(f"psi_rademacher({lam}) = {psi_rademacher(lam):.15g}")
    for v in (0.1, 0.3, 0.5, 0.7):
        val, lam = psi_star_rademacher(v)
        print(f"psi_star_rademacher({v}) = {val:.15g} at lambda {lam:.12g}")
    for lam in (1.0, 3.0):
        print(f"psi_uniform_interval({lam}) = {psi_uniform_interval(lam):.15g}")
    print(f"log(sinh 1) = {math.log(math.sinh(1.0)):.15g}")
    # Poisson(1) with psi(l) = exp(l^2/2) - 1: one-dimensional conjugates
    def poi_star(v):
        lam = optimize.brentq(lambda t: t * math.exp(t * t / 2) - v, 0, 10, xtol=1e-15)
        return lam * v - (math.exp(lam * lam / 2) - 1)
    print(f"I_2((1,2)) = {poi_star(1.0) + poi_star(2.0):.15g}")
    print(f"2 I_proj((1,2)/sqrt2) = {2 * poi_star(math.sqrt(2.5)):.15g}")
    theta = row(16, 11)
    print(f"row(16, 11) l1/sqrt(n) = {np.abs(theta).sum() / 4:.15g}")
    print(f"P(W >= 0.8 | row 16, 11) = {tail_enumerated(theta, 0.8)!r}")
    print(f"P(W >= 0.3 | row 16, 11) = {tail_enumerated(theta, 0.3)!r}")
    print(f"P(W >= 0.8 | row 16, 12) = {tail_enumerated(row(16, 12), 0.8)!r}")
