"""Closed-form geometry of the three constant-curvature model spaces.

Points and tangent vectors are plain numpy arrays in ambient coordinates,
with the last axis holding the coordinates. Every operation broadcasts over
leading axes, so a batch of walks can be advanced with one call.

* ``Euclidean(d)``: points in R^d.
* ``Sphere(d, R)``: the radius-R sphere in R^(d+1).
* ``Hyperbolic(d)``: the upper sheet of the hyperboloid <x, x>_M = -1 in
  Minkowski space R^(d,1); the time-like coordinate is the last one.

A tangent vector at ``x`` is an ambient vector in the tangent hyperplane at
``x``; its base point is always passed alongside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ContractError, CutLocusError

POINT_TOL = 1e-10
# sin of the angle below which two sphere points count as antipodal
_CUT_TOL = 1e-10


@dataclass(frozen=True)
class LogAll:
    """All exponential-map preimages of a point up to a length bound.

    ``vectors`` has shape (count, D) and is sorted by length. ``degenerate``
    is set when y is antipodal to x (or equal to x with winding lengths in
    range) on a sphere: every direction of the listed lengths maps to y and
    only one representative per length is returned.
    """

    vectors: np.ndarray
    lengths: np.ndarray
    degenerate: bool = False

    def __len__(self):
        return len(self.lengths)


class Manifold:
    """Shared interface; subclasses implement the closed forms."""

    kind: str = "abstract"
    dim: int
    ambient_dim: int

    # -- metric ---------------------------------------------------------------

    def inner(self, x, u, v):
        """Riemannian inner product of tangent vectors ``u, v`` at ``x``."""
        raise NotImplementedError

    def norm(self, x, v):
        return np.sqrt(np.maximum(self.inner(x, v, v), 0.0))

    def distance(self, x, y):
        raise NotImplementedError

    def injectivity_radius(self, x=None) -> float:
        raise NotImplementedError

    # -- maps -----------------------------------------------------------------

    def exp(self, x, v):
        raise NotImplementedError

    def log(self, x, y):
        """Minimal-length preimage of ``y`` under ``exp_x``."""
        raise NotImplementedError

    def log_min(self, x, y):
        return self.log(x, y)

    def log_all(self, x, y, bound: float) -> LogAll:
        """All ``v`` with ``exp(x, v) = y`` and ``|v| <= bound`` (single points only)."""
        if bound < 0:
            raise ConfigError(f"bound must be >= 0, got {bound}")
        x = np.asarray(x, dtype=float)
        v = self.log(x, y)
        length = float(self.norm(x, v))
        if length <= bound:
            return LogAll(v[None, :], np.array([length]))
        return LogAll(np.zeros((0, self.ambient_dim)), np.zeros(0))

    def transport(self, x, y, v):
        """Parallel transport of ``v`` from ``x`` to ``y`` along the minimizing geodesic."""
        raise NotImplementedError

    def transport_along(self, x, u, w):
        """Parallel transport of ``w`` along ``t -> exp(x, t u)``, ``t`` in [0, 1].

        Valid for any length of ``u``, including geodesics that pass the cut
        locus.
        """
        raise NotImplementedError

    def transport_chain(self, waypoints, v, inverse: bool = False):
        """Compose minimizing-geodesic transports through ``waypoints``.

        Forward: ``v`` is based at ``waypoints[0]`` and the result at
        ``waypoints[-1]``. With ``inverse=True`` the inverse map is applied:
        ``v`` is based at ``waypoints[-1]`` and mapped back to ``waypoints[0]``.
        """
        pts = [np.asarray(p, dtype=float) for p in waypoints]
        out = np.asarray(v, dtype=float)
        if inverse:
            for a, b in zip(pts[:0:-1], pts[-2::-1]):
                out = self.transport(a, b, out)
        else:
            for a, b in zip(pts[:-1], pts[1:]):
                out = self.transport(a, b, out)
        return out

    # -- representation -------------------------------------------------------

    def project(self, x):
        """Map an ambient vector onto the manifold (renormalization)."""
        return np.asarray(x, dtype=float)

    def to_tangent(self, x, v):
        """Orthogonal projection of an ambient vector onto the tangent space at ``x``."""
        return np.asarray(v, dtype=float)

    def frame(self, x):
        """Orthonormal basis of the tangent space at ``x``, shape (..., d, D)."""
        raise NotImplementedError

    def origin(self):
        raise NotImplementedError

    def check_point(self, x, tol: float = POINT_TOL):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.ambient_dim:
            raise ContractError(f"point has {x.shape[-1]} coordinates, expected {self.ambient_dim}")
        return x

    def check_tangent(self, x, v, tol: float = POINT_TOL):
        """Raise ``ContractError`` unless ``v`` lies in the tangent space at ``x``."""
        v = np.asarray(v, dtype=float)
        if v.shape[-1] != self.ambient_dim:
            raise ContractError(f"vector has {v.shape[-1]} components, expected {self.ambient_dim}")
        return v

    def coords(self, x, v):
        """Components of tangent vector ``v`` in ``frame(x)``."""
        return self.inner(x[..., None, :], self.frame(x), v[..., None, :])

    def from_coords(self, x, c):
        return np.einsum("...j,...jk->...k", c, self.frame(x))

    def random_point(self, rng, scale: float = 1.0):
        """A point at distance at most ~``scale`` from the origin."""
        o = self.origin()
        c = rng.normal(size=self.dim) * scale / math.sqrt(self.dim)
        return self.exp(o, self.from_coords(o, c))

    def random_tangent(self, rng, x, scale: float = 1.0):
        return self.from_coords(x, rng.normal(size=self.dim) * scale / math.sqrt(self.dim))

    def spec(self) -> dict:
        return {"kind": self.kind, "dim": self.dim}

    def __eq__(self, other):
        return type(self) is type(other) and self.spec() == other.spec()

    def __hash__(self):
        return hash(tuple(sorted(self.spec().items())))

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.spec().items() if k != "kind")
        return f"{type(self).__name__}({args})"


def _unit(u, norm):
    safe = np.where(norm > 0, norm, 1.0)
    return u / safe[..., None]


class Euclidean(Manifold):
    kind = "euclidean"

    def __init__(self, dim: int):
        if dim < 1:
            raise ConfigError(f"dimension must be >= 1, got {dim}")
        self.dim = self.ambient_dim = int(dim)

    def inner(self, x, u, v):
        return np.sum(np.asarray(u) * np.asarray(v), axis=-1)

    def distance(self, x, y):
        return np.linalg.norm(np.asarray(y, dtype=float) - x, axis=-1)

    def injectivity_radius(self, x=None):
        return math.inf

    def exp(self, x, v):
        return np.asarray(x, dtype=float) + v

    def log(self, x, y):
        return np.asarray(y, dtype=float) - x

    def transport(self, x, y, v):
        return np.array(np.broadcast_to(v, np.broadcast_shapes(np.shape(v), np.shape(y))), dtype=float)

    def transport_along(self, x, u, w):
        return np.array(w, dtype=float)

    def frame(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.eye(self.dim), x.shape[:-1] + (self.dim, self.dim)).copy()

    def origin(self):
        return np.zeros(self.dim)


class Sphere(Manifold):
    kind = "sphere"

    def __init__(self, dim: int, radius: float = 1.0):
        if dim < 1:
            raise ConfigError(f"dimension must be >= 1, got {dim}")
        if not radius > 0:
            raise ConfigError(f"radius must be > 0, got {radius}")
        self.dim = int(dim)
        self.ambient_dim = self.dim + 1
        self.radius = float(radius)

    def spec(self):
        return {"kind": self.kind, "dim": self.dim, "radius": self.radius}

    def inner(self, x, u, v):
        return np.sum(np.asarray(u) * np.asarray(v), axis=-1)

    def project(self, x):
        x = np.asarray(x, dtype=float)
        return self.radius * x / np.linalg.norm(x, axis=-1, keepdims=True)

    def to_tangent(self, x, v):
        x = np.asarray(x, dtype=float)
        return v - (np.sum(x * v, axis=-1) / self.radius**2)[..., None] * x

    def check_point(self, x, tol=POINT_TOL):
        x = super().check_point(x)
        if np.any(np.abs(np.linalg.norm(x, axis=-1) - self.radius) > tol * max(1.0, self.radius)):
            raise ContractError("point is not on the sphere")
        return x

    def check_tangent(self, x, v, tol=POINT_TOL):
        v = super().check_tangent(x, v)
        scale = np.maximum(1.0, np.linalg.norm(v, axis=-1)) * self.radius
        if np.any(np.abs(np.sum(np.asarray(x) * v, axis=-1)) > tol * scale):
            raise ContractError("vector is not tangent at its base point")
        return v

    def _angle(self, x, y):
        # robust on the whole range [0, pi]
        return 2.0 * np.arctan2(np.linalg.norm(y - x, axis=-1), np.linalg.norm(y + x, axis=-1))

    def distance(self, x, y):
        x = np.asarray(x, dtype=float)
        return self.radius * self._angle(x, np.asarray(y, dtype=float))

    def injectivity_radius(self, x=None):
        return math.pi * self.radius

    def exp(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v, axis=-1)
        s = n / self.radius
        out = np.cos(s)[..., None] * x + (self.radius * np.sin(s))[..., None] * _unit(v, n)
        return self.project(out)

    def _log_parts(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        u = y - (np.sum(x * y, axis=-1) / self.radius**2)[..., None] * x
        un = np.linalg.norm(u, axis=-1)
        theta = self._angle(x, y)
        return u, un, theta

    def log(self, x, y):
        u, un, theta = self._log_parts(x, y)
        if np.any((theta > math.pi / 2) & (un < _CUT_TOL * self.radius)):
            raise CutLocusError("antipodal points: minimizing geodesic is not unique")
        return (self.radius * theta)[..., None] * _unit(u, un)

    def log_all(self, x, y, bound):
        if bound < 0:
            raise ConfigError(f"bound must be >= 0, got {bound}")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        u, un, theta = self._log_parts(x, y)
        R = self.radius
        period = 2 * math.pi * R
        delta = float(R * theta)
        degenerate = bool(un < _CUT_TOL * R)
        if degenerate:
            # y == x or y == -x: every direction of the listed lengths works
            direction = self.frame(x)[0]
            base = math.pi * R if theta > math.pi / 2 else 0.0
            lengths = []
            j = 0
            while base + period * j <= bound:
                lengths.append(base + period * j)
                j += 1
            lengths = np.array(lengths)
            vectors = lengths[:, None] * direction[None, :]
            # for y == x the zero vector is an isolated preimage; only windings are a continuum
            is_deg = len(lengths) > (1 if base == 0.0 else 0)
            return LogAll(vectors, lengths, degenerate=is_deg)
        direction = u / un
        cands = []
        j = 0
        while delta + period * j <= bound:
            cands.append(delta + period * j)
            j += 1
        back = []
        j = 0
        while (period - delta) + period * j <= bound:
            back.append(-((period - delta) + period * j))
            j += 1
        signed = np.array(sorted(cands + back, key=abs))
        vectors = signed[:, None] * direction[None, :]
        return LogAll(vectors, np.abs(signed))

    def transport(self, x, y, v):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        v = np.asarray(v, dtype=float)
        denom = self.radius**2 + np.sum(x * y, axis=-1)
        if np.any(denom <= 0.5 * (_CUT_TOL * self.radius) ** 2):
            raise CutLocusError("antipodal points: transport along a minimizing geodesic is undefined")
        coef = np.sum(y * v, axis=-1) / denom
        return v - coef[..., None] * (x + y)

    def transport_along(self, x, u, w):
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        n = np.linalg.norm(u, axis=-1)
        e = _unit(u, n)
        s = (n / self.radius)[..., None]
        we = np.sum(w * e, axis=-1)[..., None]
        return w + we * ((np.cos(s) - 1.0) * e - np.sin(s) * x / self.radius)

    def frame(self, x):
        # Householder reflection taking the north pole to x/R
        x = np.asarray(x, dtype=float)
        xh = x / np.linalg.norm(x, axis=-1, keepdims=True)
        pole = np.zeros(self.ambient_dim)
        pole[-1] = 1.0
        w = xh - pole
        wn2 = np.sum(w * w, axis=-1)
        eye = np.eye(self.ambient_dim)
        safe = np.where(wn2 > 1e-30, wn2, 1.0)
        H = eye - 2.0 * w[..., :, None] * w[..., None, :] / safe[..., None, None]
        H = np.where((wn2 > 1e-30)[..., None, None], H, eye)
        # rows of the result are the images of e_1..e_d
        return np.swapaxes(H, -1, -2)[..., : self.dim, :]

    def origin(self):
        o = np.zeros(self.ambient_dim)
        o[-1] = self.radius
        return o


class Hyperbolic(Manifold):
    """Curvature -1 hyperboloid model."""

    kind = "hyperbolic"

    def __init__(self, dim: int):
        if dim < 1:
            raise ConfigError(f"dimension must be >= 1, got {dim}")
        self.dim = int(dim)
        self.ambient_dim = self.dim + 1

    @staticmethod
    def minkowski(u, v):
        u = np.asarray(u)
        v = np.asarray(v)
        return np.sum(u[..., :-1] * v[..., :-1], axis=-1) - u[..., -1] * v[..., -1]

    def inner(self, x, u, v):
        return self.minkowski(u, v)

    def project(self, x):
        x = np.array(x, dtype=float)
        x[..., -1] = np.sqrt(1.0 + np.sum(x[..., :-1] ** 2, axis=-1))
        return x

    def to_tangent(self, x, v):
        x = np.asarray(x, dtype=float)
        return v + self.minkowski(x, v)[..., None] * x

    def check_point(self, x, tol=POINT_TOL):
        x = super().check_point(x)
        scale = np.maximum(1.0, np.abs(x[..., -1])) ** 2
        if np.any(np.abs(self.minkowski(x, x) + 1.0) > tol * scale) or np.any(x[..., -1] <= 0):
            raise ContractError("point is not on the upper hyperboloid sheet")
        return x

    def check_tangent(self, x, v, tol=POINT_TOL):
        v = super().check_tangent(x, v)
        scale = np.maximum(1.0, np.abs(v).max(axis=-1)) * np.abs(np.asarray(x)[..., -1])
        if np.any(np.abs(self.minkowski(x, v)) > tol * scale):
            raise ContractError("vector is not tangent at its base point")
        return v

    def _mnorm(self, v):
        return np.sqrt(np.maximum(self.minkowski(v, v), 0.0))

    def distance(self, x, y):
        d = np.asarray(y, dtype=float) - x
        return 2.0 * np.arcsinh(self._mnorm(d) / 2.0)

    def injectivity_radius(self, x=None):
        return math.inf

    def exp(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        n = self._mnorm(v)
        out = np.cosh(n)[..., None] * x + np.sinh(n)[..., None] * _unit(v, n)
        return self.project(out)

    def log(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        u = y + self.minkowski(x, y)[..., None] * x
        un = self._mnorm(u)
        return self.distance(x, y)[..., None] * _unit(u, un)

    def transport(self, x, y, v):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        coef = self.minkowski(y, v) / (1.0 - self.minkowski(x, y))
        return v + coef[..., None] * (x + y)

    def transport_along(self, x, u, w):
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        n = self._mnorm(u)
        e = _unit(u, n)
        s = n[..., None]
        we = self.minkowski(w, e)[..., None]
        return w + we * ((np.cosh(s) - 1.0) * e + np.sinh(s) * x)

    def frame(self, x):
        # boost the standard basis at the origin to x
        x = np.asarray(x, dtype=float)
        o = self.origin()
        basis = np.eye(self.ambient_dim)[: self.dim]
        return self.transport(o, x[..., None, :], basis)

    def origin(self):
        o = np.zeros(self.ambient_dim)
        o[-1] = 1.0
        return o


def orthonormalize(manifold: Manifold, x, frame):
    """Re-project ``frame`` (..., d, D) onto the tangent space at ``x`` and Gram-Schmidt it."""
    x = np.asarray(x, dtype=float)
    xb = x[..., None, :]
    f = manifold.to_tangent(xb, frame)
    out = np.empty_like(f)
    for j in range(f.shape[-2]):
        w = f[..., j, :]
        for i in range(j):
            w = w - manifold.inner(x, out[..., i, :], w)[..., None] * out[..., i, :]
        out[..., j, :] = w / manifold.norm(x, w)[..., None]
    return out


def parse_manifold(spec) -> Manifold:
    """Build a manifold from ``"sphere:2:1"``, ``"euclidean:3"``, ``"hyperbolic:2"`` or a dict."""
    if isinstance(spec, Manifold):
        return spec
    if isinstance(spec, dict):
        kind = str(spec.get("kind", "")).lower()
        dim = spec.get("dim")
        radius = spec.get("radius", 1.0)
    elif isinstance(spec, str):
        parts = spec.split(":")
        kind = parts[0].lower()
        try:
            dim = int(parts[1]) if len(parts) > 1 else None
            radius = float(parts[2]) if len(parts) > 2 else 1.0
        except ValueError as exc:
            raise ConfigError(f"malformed manifold spec {spec!r}") from exc
    else:
        raise ConfigError(f"cannot interpret manifold spec {spec!r}")
    if dim is None:
        raise ConfigError(f"manifold spec {spec!r} is missing a dimension")
    if kind in ("euclidean", "flat", "r"):
        return Euclidean(int(dim))
    if kind in ("sphere", "s"):
        return Sphere(int(dim), float(radius))
    if kind in ("hyperbolic", "hyperboloid", "h"):
        if float(radius) != 1.0:
            raise ConfigError("only curvature -1 hyperbolic space is supported")
        return Hyperbolic(int(dim))
    raise ConfigError(f"unknown manifold kind {kind!r}")
