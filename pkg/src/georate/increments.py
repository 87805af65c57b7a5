"""Increment laws: samplers and log-moment generating functions.

A law is specified once, in coordinates of an orthonormal frame of the
tangent space at the starting point. Sampling at another point draws those
coordinates and expresses them in the frame carried there by parallel
transport (see :mod:`georate.walk`).

Every law exposes ``logmgf``, ``grad_logmgf`` and ``hess_logmgf``. They take
arguments of shape (..., dim) and broadcast over the leading axes.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, ive

from .errors import ConfigError
from .manifold import Euclidean, Manifold

# below this radial argument the Bessel forms are replaced by their series
_SERIES_CUTOFF = 1e-3


def _shrink_to_radius(x, r):
    """Guarantee |x| <= r exactly after normalization round-off."""
    n = np.linalg.norm(x, axis=-1, keepdims=True)
    return np.where(n > r, x * (r / n) * (1.0 - 2.0**-50), x)


def _log_cosh(t):
    a = np.abs(t)
    return a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0)


class IncrementLaw:
    """Common behaviour. Subclasses set ``dim``, ``r`` (support radius) and ``isotropic``."""

    kind = "abstract"
    dim: int
    r: float = math.inf
    isotropic: bool = False
    bounded: bool = False
    # entire log-MGF: Gauss-Hermite quadrature is accurate for it
    entire: bool = False

    def sample_coeffs(self, rng, size):
        """Draw ``size`` samples of the law in frame coordinates, shape (size, dim)."""
        raise NotImplementedError

    def logmgf(self, lam):
        raise NotImplementedError

    def grad_logmgf(self, lam):
        raise NotImplementedError

    def hess_logmgf(self, lam):
        raise NotImplementedError

    def mean(self):
        return np.zeros(self.dim)

    def second_moment(self):
        """E[X X^T] in frame coordinates."""
        raise NotImplementedError

    def check_manifold(self, manifold: Manifold):
        """Raise ``ConfigError`` unless this law can drive a walk on ``manifold``."""
        if not self.bounded:
            raise ConfigError(f"{self.kind} increments are unbounded and cannot drive a geodesic walk")
        if manifold.dim != self.dim:
            raise ConfigError(f"law dimension {self.dim} does not match manifold dimension {manifold.dim}")
        if not isinstance(manifold, Euclidean) and not self.isotropic:
            raise ConfigError(
                f"{self.kind} is not rotation invariant; on a curved manifold holonomy "
                "breaks transport invariance of such laws"
            )

    def spec(self) -> dict:
        raise NotImplementedError

    def scaled(self, factor: float) -> "IncrementLaw":
        """The law of ``factor * X`` (bounded laws only)."""
        if not self.bounded:
            raise ConfigError(f"{self.kind} increments cannot be rescaled as a bounded law")
        spec = dict(self.spec())
        spec["r"] = self.r * float(factor)
        return parse_law(spec)

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.spec().items() if k != "kind")
        return f"{type(self).__name__}({args})"

    def __eq__(self, other):
        return type(self) is type(other) and self.spec() == other.spec()

    def __hash__(self):
        return hash(repr(self))


class _Radial(IncrementLaw):
    """Rotation-invariant bounded law whose 1-D marginal MGF is a Bessel ratio.

    For both the sphere shell and the ball, ``E exp(s <e, X/r>)`` equals
    ``Gamma(nu+1) (2/s)^nu I_nu(s)`` with ``nu = d/2 - 1`` (shell) or
    ``nu = d/2`` (ball).
    """

    isotropic = True
    bounded = True
    nu: float

    def __init__(self, r: float, dim: int):
        if not (r > 0 and math.isfinite(r)):
            raise ConfigError(f"support radius must be positive and finite, got {r}")
        if dim < 1:
            raise ConfigError(f"dimension must be >= 1, got {dim}")
        self.r = float(r)
        self.dim = int(dim)

    # radial profile f(s) = log E exp(s e.U) and its derivatives
    def _f(self, s):
        nu = self.nu
        c = 2.0 * nu + 2.0
        small = s < _SERIES_CUTOFF
        ss = np.where(small, 1.0, s)
        big = gammaln(nu + 1.0) + nu * np.log(2.0 / ss) + np.log(ive(nu, ss)) + ss
        series = s**2 / (2.0 * c) - s**4 / (4.0 * c**2 * (c + 2.0))
        return np.where(small, series, big)

    def _ratio(self, s):
        # f'(s) = I_{nu+1}(s) / I_nu(s)
        c = 2.0 * self.nu + 2.0
        small = s < _SERIES_CUTOFF
        ss = np.where(small, 1.0, s)
        big = ive(self.nu + 1.0, ss) / ive(self.nu, ss)
        series = s / c - s**3 / (c**2 * (c + 2.0))
        return np.where(small, series, big)

    def _ratio_over_s(self, s):
        c = 2.0 * self.nu + 2.0
        small = s < _SERIES_CUTOFF
        ss = np.where(small, 1.0, s)
        return np.where(small, 1.0 / c - s**2 / (c**2 * (c + 2.0)), self._ratio(ss) / ss)

    def _fpp(self, s):
        c = 2.0 * self.nu + 2.0
        small = s < _SERIES_CUTOFF
        ss = np.where(small, 1.0, s)
        a = self._ratio(ss)
        big = 1.0 - a * a - (2.0 * self.nu + 1.0) * a / ss
        return np.where(small, 1.0 / c - 3.0 * s**2 / (c**2 * (c + 2.0)), big)

    def logmgf(self, lam):
        lam = np.asarray(lam, dtype=float)
        s = self.r * np.linalg.norm(lam, axis=-1)
        return self._f(s)

    def grad_logmgf(self, lam):
        lam = np.asarray(lam, dtype=float)
        s = self.r * np.linalg.norm(lam, axis=-1)
        return (self.r**2 * self._ratio_over_s(s))[..., None] * lam

    def hess_logmgf(self, lam):
        lam = np.asarray(lam, dtype=float)
        norm = np.linalg.norm(lam, axis=-1)
        s = self.r * norm
        e = lam / np.where(norm > 0, norm, 1.0)[..., None]
        outer = e[..., :, None] * e[..., None, :]
        eye = np.eye(self.dim)
        radial = (self.r**2 * self._fpp(s))[..., None, None]
        tangential = (self.r**2 * self._ratio_over_s(s))[..., None, None]
        return radial * outer + tangential * (eye - outer)

    def spec(self):
        return {"kind": self.kind, "r": self.r, "dim": self.dim}


class UniformSphereShell(_Radial):
    """Uniform law on the radius-r sphere of the tangent space."""

    kind = "shell"

    @property
    def nu(self):
        return self.dim / 2.0 - 1.0

    def sample_coeffs(self, rng, size):
        g = rng.standard_normal((size, self.dim))
        x = self.r * g / np.linalg.norm(g, axis=-1, keepdims=True)
        return _shrink_to_radius(x, self.r)

    def second_moment(self):
        return self.r**2 / self.dim * np.eye(self.dim)


class UniformBall(_Radial):
    """Uniform law on the closed radius-r ball of the tangent space."""

    kind = "ball"

    @property
    def nu(self):
        return self.dim / 2.0

    def sample_coeffs(self, rng, size):
        g = rng.standard_normal((size, self.dim))
        radius = self.r * rng.random(size) ** (1.0 / self.dim)
        x = radius[:, None] * g / np.linalg.norm(g, axis=-1, keepdims=True)
        return _shrink_to_radius(x, self.r)

    def second_moment(self):
        return self.r**2 / (self.dim + 2) * np.eye(self.dim)


class TwoPointAxis(IncrementLaw):
    """``+-r e_axis`` with probability 1/2 each. Only valid on flat manifolds."""

    kind = "two_point"
    bounded = True

    def __init__(self, r: float, dim: int = 1, axis: int = 0):
        if not (r > 0 and math.isfinite(r)):
            raise ConfigError(f"support radius must be positive and finite, got {r}")
        if not 0 <= axis < dim:
            raise ConfigError(f"axis {axis} out of range for dimension {dim}")
        self.r = float(r)
        self.dim = int(dim)
        self.axis = int(axis)
        # in one dimension the two-point law is rotation invariant
        self.isotropic = self.dim == 1

    def sample_coeffs(self, rng, size):
        out = np.zeros((size, self.dim))
        out[:, self.axis] = self.r * rng.choice(np.array([-1.0, 1.0]), size=size)
        return out

    def logmgf(self, lam):
        lam = np.asarray(lam, dtype=float)
        return _log_cosh(self.r * lam[..., self.axis])

    def grad_logmgf(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros_like(lam)
        out[..., self.axis] = self.r * np.tanh(self.r * lam[..., self.axis])
        return out

    def hess_logmgf(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape + (self.dim,))
        out[..., self.axis, self.axis] = self.r**2 / np.cosh(self.r * lam[..., self.axis]) ** 2
        return out

    def second_moment(self):
        m = np.zeros((self.dim, self.dim))
        m[self.axis, self.axis] = self.r**2
        return m

    def spec(self):
        return {"kind": self.kind, "r": self.r, "dim": self.dim, "axis": self.axis}


class Rademacher1D(TwoPointAxis):
    """``+-r`` with probability 1/2 each on the real line."""

    kind = "rademacher"

    def __init__(self, r: float = 1.0):
        super().__init__(r, dim=1, axis=0)

    def spec(self):
        return {"kind": self.kind, "r": self.r, "dim": 1}


class Gaussian(IncrementLaw):
    """Centered Gaussian with covariance ``cov``. Rate computations only."""

    kind = "gaussian"
    entire = True

    def __init__(self, dim: int = 1, cov=None):
        self.dim = int(dim)
        if cov is None:
            cov = np.eye(self.dim)
        cov = np.atleast_2d(np.asarray(cov, dtype=float))
        if cov.shape != (self.dim, self.dim):
            raise ConfigError(f"covariance must be {self.dim}x{self.dim}")
        if not np.allclose(cov, cov.T) or np.linalg.eigvalsh(cov).min() < 0:
            raise ConfigError("covariance must be symmetric positive semidefinite")
        self.cov = cov
        self.isotropic = bool(np.allclose(cov, cov[0, 0] * np.eye(self.dim)))

    def sample_coeffs(self, rng, size):
        return rng.multivariate_normal(np.zeros(self.dim), self.cov, size=size)

    def logmgf(self, lam):
        lam = np.asarray(lam, dtype=float)
        return 0.5 * np.einsum("...i,ij,...j->...", lam, self.cov, lam)

    def grad_logmgf(self, lam):
        return np.asarray(lam, dtype=float) @ self.cov

    def hess_logmgf(self, lam):
        lam = np.asarray(lam, dtype=float)
        return np.broadcast_to(self.cov, lam.shape + (self.dim,)).copy()

    def second_moment(self):
        return self.cov.copy()

    def spec(self):
        out = {"kind": self.kind, "dim": self.dim}
        if not np.allclose(self.cov, np.eye(self.dim)):
            out["cov"] = self.cov.tolist()
        return out


class PoissonProduct(IncrementLaw):
    """Independent Poisson(rate) coordinates. Rate computations only."""

    kind = "poisson"
    entire = True

    def __init__(self, rate: float = 1.0, dim: int = 1):
        if not rate > 0:
            raise ConfigError(f"Poisson rate must be > 0, got {rate}")
        self.rate = float(rate)
        self.dim = int(dim)

    def sample_coeffs(self, rng, size):
        return rng.poisson(self.rate, size=(size, self.dim)).astype(float)

    def logmgf(self, lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(over="ignore"):
            return self.rate * np.sum(np.expm1(lam), axis=-1)

    def grad_logmgf(self, lam):
        with np.errstate(over="ignore"):
            return self.rate * np.exp(np.asarray(lam, dtype=float))

    def hess_logmgf(self, lam):
        g = self.grad_logmgf(lam)
        return g[..., :, None] * np.eye(self.dim)

    def mean(self):
        return np.full(self.dim, self.rate)

    def second_moment(self):
        return self.rate * np.eye(self.dim) + self.rate**2 * np.ones((self.dim, self.dim))

    def spec(self):
        return {"kind": self.kind, "rate": self.rate, "dim": self.dim}


def sample(law: IncrementLaw, manifold: Manifold, at, frame, rng, size=None):
    """Draw increments of ``law`` in the tangent space at ``at``.

    ``frame`` is the orthonormal frame at ``at`` obtained by transporting the
    reference frame from the starting point. Returns ambient vectors of shape
    (D,) or (size, D).
    """
    law.check_manifold(manifold)
    n = 1 if size is None else size
    coeffs = law.sample_coeffs(rng, n)
    out = coeffs @ np.asarray(frame, dtype=float)
    return out[0] if size is None else out


_ALIASES = {
    "shell": UniformSphereShell,
    "uniformsphereshell": UniformSphereShell,
    "sphere_shell": UniformSphereShell,
    "ball": UniformBall,
    "uniformball": UniformBall,
    "two_point": TwoPointAxis,
    "twopoint": TwoPointAxis,
    "twopointaxis": TwoPointAxis,
    "rademacher": Rademacher1D,
    "rademacher1d": Rademacher1D,
    "gaussian": Gaussian,
    "normal": Gaussian,
    "poisson": PoissonProduct,
    "poissonproduct": PoissonProduct,
}


def parse_law(spec, dim: int | None = None) -> IncrementLaw:
    """Build a law from a config dict or a CLI shorthand.

    Dict form: ``{"kind": "shell", "r": 1, "dim": 2}``. Shorthands:
    ``shell:1``, ``ball:0.5``, ``twopoint:1:0`` (radius, axis),
    ``rademacher:1``, ``gaussian``, ``poisson1`` / ``poisson:2``.
    ``dim`` fills in a missing dimension.
    """
    if isinstance(spec, IncrementLaw):
        return spec
    if isinstance(spec, str):
        parts = spec.strip().split(":")
        head = parts[0].lower()
        args = parts[1:]
        if head.startswith("poisson") and head != "poisson" and not args:
            args = [head[len("poisson"):]]
            head = "poisson"
        d = {"kind": head}
        try:
            if head == "poisson":
                if args:
                    d["rate"] = float(args[0])
            elif head in ("gaussian", "normal"):
                pass
            else:
                if args:
                    d["r"] = float(args[0])
                if head in ("twopoint", "two_point") and len(args) > 1:
                    d["axis"] = int(args[1])
        except ValueError as exc:
            raise ConfigError(f"malformed law shorthand {spec!r}") from exc
        spec = d
    if not isinstance(spec, dict):
        raise ConfigError(f"cannot interpret law spec {spec!r}")
    kind = str(spec.get("kind", "")).lower()
    cls = _ALIASES.get(kind)
    if cls is None:
        raise ConfigError(f"unknown law kind {kind!r}")
    d = spec.get("dim", dim)
    if cls is Rademacher1D:
        if d not in (None, 1):
            raise ConfigError("rademacher increments are one-dimensional")
        return Rademacher1D(float(spec.get("r", 1.0)))
    if d is None:
        raise ConfigError(f"law {kind!r} needs a dimension")
    d = int(d)
    if cls is Gaussian:
        return Gaussian(d, spec.get("cov"))
    if cls is PoissonProduct:
        return PoissonProduct(float(spec.get("rate", 1.0)), d)
    if "r" not in spec:
        raise ConfigError(f"law {kind!r} needs a support radius 'r'")
    if cls is TwoPointAxis:
        return TwoPointAxis(float(spec["r"]), d, int(spec.get("axis", 0)))
    return cls(float(spec["r"]), d)
