"""Rate-function numerics for weighted walks.

``psi(lam) = E[logmgf(Z lam)]`` with ``Z ~ N(0, 1)`` is computed by a fixed
quadrature rule; its convex conjugate ``psi_star`` is the universal rate
function of the weighted walk in a vector space. ``rate_manifold`` takes the
infimum of ``psi_star`` over all exponential-map preimages of a point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalError
from .increments import IncrementLaw
from .manifold import Manifold
from .quadrature import Rule, default_rule
from .weights import WeightRow

MEAN_ABS_Z = math.sqrt(2.0 / math.pi)
DIVERGENCE_LEVEL = 1e6
PREIMAGE_MARGIN = 1e-9


@dataclass(frozen=True)
class RateProblem:
    """A log-MGF together with the quadrature used to average it over ``Z``."""

    law: IncrementLaw
    rule: Rule = None

    def __post_init__(self):
        if self.rule is None:
            object.__setattr__(self, "rule", default_rule(self.law))

    @property
    def dim(self) -> int:
        return self.law.dim

    @property
    def support_radius(self) -> float:
        return self.law.r if self.law.bounded else math.inf

    def with_rule(self, rule: Rule) -> "RateProblem":
        return RateProblem(self.law, rule)


@dataclass
class LegendreResult:
    value: float
    argmax: np.ndarray | None
    iterations: int = 0
    converged: bool = True
    divergent: bool = False

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax": None if self.argmax is None else [float(a) for a in self.argmax],
            "iterations": self.iterations,
            "converged": self.converged,
            "divergent": self.divergent,
        }


def _as_lambda(p: RateProblem, lam):
    lam = np.asarray(lam, dtype=float)
    if lam.ndim == 0:
        lam = lam[None]
    if lam.shape[-1] != p.dim:
        raise ConfigError(f"argument has dimension {lam.shape[-1]}, law has {p.dim}")
    return lam


def psi(p: RateProblem, lam):
    """``E[logmgf(Z lam)]``; broadcasts over leading axes of ``lam``."""
    lam = _as_lambda(p, lam)
    pts = lam[..., None, :] * p.rule.nodes[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        vals = p.law.logmgf(pts)
        out = vals @ p.rule.weights
    return out if out.ndim else float(out)


def grad_psi(p: RateProblem, lam):
    lam = _as_lambda(p, lam)
    z = p.rule.nodes
    pts = lam[..., None, :] * z[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        g = p.law.grad_logmgf(pts)
        return np.einsum("...qi,q->...i", g, p.rule.weights * z)


def hess_psi(p: RateProblem, lam):
    lam = _as_lambda(p, lam)
    z = p.rule.nodes
    pts = lam[..., None, :] * z[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        h = p.law.hess_logmgf(pts)
        return np.einsum("...qij,q->...ij", h, p.rule.weights * z * z)


def _objective(p, v, lam):
    val = float(lam @ v) - psi(p, lam)
    return val if math.isfinite(val) else -math.inf


def _newton(p: RateProblem, v, start, max_iter, tol):
    lam = np.array(start, dtype=float)
    f = _objective(p, v, lam)
    if not math.isfinite(f):
        return lam, f, 0, False, False
    for it in range(1, max_iter + 1):
        g = v - grad_psi(p, lam)
        gnorm = float(np.max(np.abs(g)))
        if gnorm <= tol:
            return lam, f, it - 1, True, False
        H = hess_psi(p, lam)
        reg = 1e-12 * max(1.0, float(np.trace(H)))
        try:
            d = np.linalg.solve(H + reg * np.eye(p.dim), g)
        except np.linalg.LinAlgError:
            d = g
        slope = float(g @ d)
        if not slope > 0:
            d, slope = g, float(g @ g)
        t = 1.0
        accepted = False
        # objective values closer than this are indistinguishable in floating point
        noise = 64.0 * np.finfo(float).eps * max(1.0, abs(f))
        for _ in range(80):
            trial = lam + t * d
            ft = _objective(p, v, trial)
            if ft >= f + 1e-4 * t * slope - noise:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            # no representable ascent left: at the optimum up to round-off
            return lam, f, it, gnorm <= 1e-7 * max(1.0, float(np.abs(v).max())), False
        lam, f = trial, ft
        if f > DIVERGENCE_LEVEL:
            return lam, math.inf, it, True, True
    return lam, f, max_iter, False, False


def psi_star(p: RateProblem, v, max_iter: int = 500, tol: float = 1e-11) -> LegendreResult:
    """Legendre transform ``sup_lam <lam, v> - psi(lam)`` by damped Newton.

    Returns ``+inf`` (``divergent=True``) when the law is bounded and
    ``|v| >= r E|Z|``, or when the objective passes ``DIVERGENCE_LEVEL``.
    Raises :class:`NumericalError` if no start converges.
    """
    v = _as_lambda(p, v)
    if v.ndim != 1:
        raise ConfigError("psi_star takes a single vector")
    if not np.all(np.isfinite(v)):
        raise ConfigError("psi_star argument must be finite")
    vnorm = float(np.linalg.norm(v))
    if p.law.bounded and vnorm >= p.support_radius * MEAN_ABS_Z:
        return LegendreResult(math.inf, None, 0, True, True)
    if vnorm == 0.0:
        return LegendreResult(0.0, np.zeros(p.dim), 0, True, False)
    starts = [np.zeros(p.dim), v, -v, 2.0 * v / max(vnorm, 1.0)]
    tol = tol * max(1.0, float(np.abs(v).max()))
    attempts = []
    for start in starts:
        lam, f, its, ok, div = _newton(p, v, start, max_iter, tol)
        if div:
            return LegendreResult(math.inf, None, its, True, True)
        if ok:
            return LegendreResult(max(f, 0.0), lam, its, True, False)
        attempts.append({"start": start.tolist(), "end": lam.tolist(), "objective": f, "iterations": its})
    raise NumericalError(f"Legendre transform did not converge at v={v.tolist()}", {"attempts": attempts})


def rate_manifold(p: RateProblem, manifold: Manifold, x0, x) -> float:
    """``inf psi_star(v)`` over ``v`` with ``exp(x0, v) = x``.

    Preimages longer than ``r E|Z|`` have infinite rate and are not searched.
    Vectors are converted to coordinates of ``manifold.frame(x0)``, the frame
    in which the law is specified.
    """
    if not p.law.bounded:
        raise ConfigError("the manifold rate function needs a bounded increment law")
    if p.dim != manifold.dim:
        raise ConfigError(f"law dimension {p.dim} does not match manifold dimension {manifold.dim}")
    x0 = np.asarray(x0, dtype=float)
    bound = p.support_radius * MEAN_ABS_Z + PREIMAGE_MARGIN
    pre = manifold.log_all(x0, x, bound)
    best = math.inf
    for vec in pre.vectors:
        res = psi_star(p, manifold.coords(x0, vec))
        best = min(best, res.value)
    return best


def rate_k(mu1: IncrementLaw, k: int, v) -> float:
    """Rate of the product law ``mu1^k``: sum of one-dimensional transforms."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if mu1.dim != 1:
        raise ConfigError("rate_k expects a one-dimensional law")
    if v.shape != (k,):
        raise ConfigError(f"v must have {k} components")
    p = RateProblem(mu1)
    total = 0.0
    for vi in v:
        total += psi_star(p, [vi]).value
    return total


def rate_proj(mu1: IncrementLaw, k: int, v) -> float:
    """Projection rate ``sup_lam <lam, v> - E logmgf_1(|lam| Z)``.

    The objective depends on ``lam`` only through ``<lam, v>`` and ``|lam|``,
    so the optimum lies on the ray through ``v`` and the problem reduces to
    the one-dimensional transform evaluated at ``|v|``.
    """
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if mu1.dim != 1:
        raise ConfigError("rate_proj expects a one-dimensional law")
    if v.shape != (k,):
        raise ConfigError(f"v must have {k} components")
    return psi_star(RateProblem(mu1), [np.linalg.norm(v)]).value


def rate_proj_argmax(mu1: IncrementLaw, v) -> np.ndarray:
    v = np.atleast_1d(np.asarray(v, dtype=float))
    vn = np.linalg.norm(v)
    res = psi_star(RateProblem(mu1), [vn])
    if res.argmax is None or vn == 0:
        return None if res.argmax is None else np.zeros_like(v)
    return res.argmax[0] * v / vn


def mgf_log_exact(row: WeightRow, law: IncrementLaw, lam, k: int = 1) -> float:
    """``(1/n) log E exp(n <lam, W>)`` for the prefix sum of the first ``n // k`` terms.

    Independence factorizes the expectation, so this is
    ``(1/n) sum_{i <= n//k} logmgf(sqrt(n) theta_i lam)``. Returns ``inf`` on
    overflow.
    """
    if k < 1:
        raise ConfigError("prefix divisor k must be >= 1")
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    n = row.n
    head = row.theta[: n // k]
    with np.errstate(over="ignore", invalid="ignore"):
        vals = law.logmgf(math.sqrt(n) * head[:, None] * lam[None, :])
        total = float(np.sum(vals)) / n
    return total if math.isfinite(total) else math.inf
