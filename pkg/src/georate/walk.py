"""Weighted geodesic random walks and the tangent-space constructions around them.

A walk with weight row ``theta`` (unit vector of length ``n``) starts at
``x0`` and moves by ``S_k = exp(S_{k-1}, theta_k / sqrt(n) * X_k)``, where
``X_k`` is drawn at ``S_{k-1}``. Increments are drawn in frame coordinates
and mapped through a frame that is parallel transported along the path.

The remaining functions pull a path back to the tangent space at ``x0``:
minimal-length pullbacks over a partition into ``m`` pieces, the chained
transport ``tau_rw``, the piece sums ``Y`` / ``Ybar`` and the two maps that
rebuild a manifold point from ``m`` tangent vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, CutLocusError
from .increments import IncrementLaw
from .manifold import Euclidean, Manifold, orthonormalize
from .weights import WeightRow, sample_row

# walk-invariant slack: accumulated round-off over O(1e3) steps stays far below this
BOUND_SLACK = 1e-10


def trial_rng(master_seed: int, *keys: int) -> np.random.Generator:
    """Independent stream keyed by ``(master_seed, *keys)``; does not depend on worker layout."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *(int(k) for k in keys)]))


@dataclass
class WalkPath:
    manifold: Manifold
    x0: np.ndarray
    row: WeightRow
    increments: np.ndarray  # (n, D), X_k based at points[k - 1]
    points: np.ndarray  # (n + 1, D)
    support_radius: float
    law: IncrementLaw | None = None
    seed: tuple | int | None = None

    @property
    def n(self) -> int:
        return self.row.n

    @property
    def endpoint(self) -> np.ndarray:
        return self.points[-1]

    def steps(self) -> np.ndarray:
        """Tangent vectors actually followed: ``theta_k / sqrt(n) * X_k``."""
        return (self.row.theta / math.sqrt(self.n))[:, None] * self.increments

    def replay_error(self) -> float:
        """Max distance between stored ``S_k`` and ``exp(S_{k-1}, step_k)``."""
        redo = self.manifold.exp(self.points[:-1], self.steps())
        return float(np.max(self.manifold.distance(redo, self.points[1:])))


@dataclass(frozen=True)
class Partition:
    """Cut points ``n_i = i * (n // m)`` for ``i < m`` and ``n_m = n``."""

    n: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ConfigError(f"partition needs m >= 1, got {self.m}")
        if self.n < self.m:
            raise ConfigError(f"cannot split n={self.n} steps into m={self.m} pieces")

    @property
    def block(self) -> int:
        return self.n // self.m

    @property
    def cuts(self) -> np.ndarray:
        c = np.arange(self.m + 1) * self.block
        c[-1] = self.n
        return c

    def validate(self, r: float, manifold: Manifold) -> "Partition":
        """Reject the partition unless ``r / sqrt(m)`` is below the injectivity radius."""
        inj = manifold.injectivity_radius()
        # the last piece can hold up to m - 1 extra steps
        reach = r * math.sqrt((self.n - self.cuts[-2]) / self.n)
        if not (r / math.sqrt(self.m) < inj and reach < inj):
            raise ConfigError(
                f"partition m={self.m} too coarse: pieces reach {reach:.4g} >= injectivity radius {inj:.4g}"
            )
        return self


def _advance(manifold: Manifold, x0, theta, coeffs):
    """Vectorized walk kernel over a batch of paths.

    theta: (P, n) weight rows; coeffs: (P, n, d) increments in frame coordinates.
    Returns points (P, n+1, D) and ambient increments (P, n, D).
    """
    P, n = theta.shape
    D = manifold.ambient_dim
    x0 = np.asarray(x0, dtype=float)
    S = np.broadcast_to(x0, (P, D)).copy()
    F = np.broadcast_to(manifold.frame(x0), (P, manifold.dim, D)).copy()
    points = np.empty((P, n + 1, D))
    incs = np.empty((P, n, D))
    points[:, 0] = S
    alpha = theta / math.sqrt(n)
    flat = isinstance(manifold, Euclidean)
    for k in range(n):
        X = np.einsum("pj,pjk->pk", coeffs[:, k], F)
        incs[:, k] = X
        step = alpha[:, k, None] * X
        S_next = manifold.exp(S, step)
        if not flat:
            F = manifold.transport_along(S[:, None, :], step[:, None, :], F)
            F = orthonormalize(manifold, S_next, F)
        S = S_next
        points[:, k + 1] = S
    return points, incs


def walk_from_coeffs(manifold: Manifold, x0, row: WeightRow, coeffs, support_radius=math.inf, law=None, seed=None):
    """Walk driven by given increments in frame coordinates (shape (n, d))."""
    coeffs = np.asarray(coeffs, dtype=float).reshape(row.n, manifold.dim)
    x0 = manifold.check_point(np.asarray(x0, dtype=float))
    pts, incs = _advance(manifold, x0, row.theta[None, :], coeffs[None])
    return WalkPath(manifold, x0, row, incs[0], pts[0], support_radius, law, seed)


def run_walk(manifold: Manifold, law: IncrementLaw, row: WeightRow, x0, rng, seed=None) -> WalkPath:
    """Simulate one walk. Increments are drawn from ``rng`` after any draws already made."""
    law.check_manifold(manifold)
    coeffs = law.sample_coeffs(rng, row.n)
    return walk_from_coeffs(manifold, x0, row, coeffs, law.r, law, seed if seed is not None else row.seed)


def run_walks(
    manifold: Manifold,
    law: IncrementLaw,
    n: int,
    x0,
    master_seed: int,
    trials: int,
    first_trial: int = 0,
    row: WeightRow | None = None,
    key: tuple = (),
):
    """Simulate ``trials`` walks, trial ``i`` using stream ``(master_seed, *key, i)``.

    Each trial draws its weight row and then its increments from its own
    stream, so trial ``i`` equals
    ``run_walk(m, law, sample_row(n, rng), x0, rng)`` with
    ``rng = trial_rng(master_seed, *key, i)``. With a fixed ``row`` only the
    increments are drawn.
    """
    law.check_manifold(manifold)
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if row is not None and row.n != n:
        raise ConfigError(f"weight row has length {row.n}, expected {n}")
    x0 = manifold.check_point(np.asarray(x0, dtype=float))
    rows, coeffs, seeds = [], [], []
    for t in range(first_trial, first_trial + trials):
        rng = trial_rng(master_seed, *key, t)
        rows.append(row if row is not None else sample_row(n, rng, seed=t))
        coeffs.append(law.sample_coeffs(rng, n))
        seeds.append((master_seed, *key, t))
    theta = np.stack([r.theta for r in rows])
    pts, incs = _advance(manifold, x0, theta, np.stack(coeffs))
    return [WalkPath(manifold, x0, rows[i], incs[i], pts[i], law.r, law, seeds[i]) for i in range(trials)]


# -- diagnostics ----------------------------------------------------------------


def lemma_slack(path: WalkPath) -> float:
    """``min_k r sqrt(k/n) - d(S_k, x0)``; non-negative when the distance bound holds."""
    k = np.arange(path.n + 1)
    d = path.manifold.distance(path.x0, path.points)
    return float(np.min(path.support_radius * np.sqrt(k / path.n) - d))


def piece_slack(path: WalkPath, partition: Partition) -> float:
    """``min r/sqrt(m) - d(S_{n_i}, S_{n_i + k})`` over ``1 <= k <= n // m`` and cut points."""
    b = partition.block
    worst = math.inf
    for start in partition.cuts[:-1]:
        stop = min(start + b, path.n)
        d = path.manifold.distance(path.points[start], path.points[start + 1 : stop + 1])
        worst = min(worst, float(np.min(path.support_radius / math.sqrt(partition.m) - d)))
    return worst


def _internal(fn, *args):
    try:
        return fn(*args)
    except CutLocusError as exc:  # guaranteed impossible under a validated partition
        raise AssertionError(f"cut locus reached inside a safe region: {exc}") from exc


def tangent_pullbacks(path: WalkPath, partition: Partition) -> list[np.ndarray]:
    """Minimal-length pullbacks ``log(S_{n_{i-1}}, S_{n_{i-1}+k})`` per piece.

    Entry ``i - 1`` of the result has shape (len_i + 1, D), row ``k`` for
    ``k = 0 .. n_i - n_{i-1}``.
    """
    partition.validate(path.support_radius, path.manifold)
    cuts = partition.cuts
    out = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        base = path.points[a]
        out.append(_internal(path.manifold.log, base[None, :], path.points[a : b + 1]))
    return out


class TauRW:
    """Transport ``T_{x0} M -> T_{S_{n_i}} M`` chained through the cut points."""

    def __init__(self, manifold: Manifold, waypoints):
        self.manifold = manifold
        self.waypoints = [np.asarray(w, dtype=float) for w in waypoints]

    def __call__(self, v):
        return _internal(self.manifold.transport_chain, self.waypoints, v)

    def inverse(self, w):
        return _internal(lambda: self.manifold.transport_chain(self.waypoints, w, inverse=True))


def tau_rw(path: WalkPath, partition: Partition, i: int) -> TauRW:
    if not 0 <= i <= partition.m:
        raise ConfigError(f"piece index {i} out of range 0..{partition.m}")
    cuts = partition.cuts
    return TauRW(path.manifold, [path.points[c] for c in cuts[: i + 1]])


def _local_sums(path: WalkPath, partition: Partition) -> list[np.ndarray]:
    """``sum_k theta_k tau^{-1}_{S_{n_{i-1}} S_{k-1}} X_k`` in the tangent space at ``S_{n_{i-1}}``."""
    m = path.manifold
    cuts = partition.cuts
    out = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        base = path.points[a]
        src = path.points[a:b]  # S_{k-1} for k = a+1 .. b
        back = _internal(m.transport, src, base[None, :], path.increments[a:b])
        out.append(path.row.theta[a:b] @ back)
    return out


def piece_sums_upper(path: WalkPath, partition: Partition) -> np.ndarray:
    """Unnormalized piece sums ``Y_i`` in ``T_{x0} M``, shape (m, D)."""
    partition.validate(path.support_radius, path.manifold)
    sums = _local_sums(path, partition)
    return np.stack([tau_rw(path, partition, i).inverse(s) for i, s in enumerate(sums)])


def geodesic_waypoints(manifold: Manifold, x0, v, m: int):
    """``gamma_v(i/m)`` for ``i = 0 .. m``."""
    x0 = np.asarray(x0, dtype=float)
    t = np.arange(m + 1) / m
    return manifold.exp(x0[None, :], t[:, None] * np.asarray(v, dtype=float)[None, :])


def _along_to(manifold, x0, v, t, w):
    """Transport ``w`` from ``x0`` to ``gamma_v(t)`` along ``gamma_v``."""
    return manifold.transport_along(x0, t * np.asarray(v, dtype=float), w)


def _along_back(manifold, x0, v, t, w):
    """Inverse of :func:`_along_to`: from ``gamma_v(t)`` back to ``x0`` along ``gamma_v``."""
    v = np.asarray(v, dtype=float)
    xt = manifold.exp(x0, t * v)
    vel = manifold.transport_along(x0, t * v, v)
    return manifold.transport_along(xt, -t * vel, w)


def _lower_pullback(path: WalkPath, partition: Partition, v, local: list[np.ndarray]) -> np.ndarray:
    m = path.manifold
    cuts = partition.cuts
    wp = geodesic_waypoints(m, path.x0, v, partition.m)
    out = []
    for i, vec in enumerate(local):
        s = path.points[cuts[i]]
        at_wp = m.transport(s, wp[i], vec)  # tau^{-1}_{x_i S_{n_i}}
        out.append(_along_back(m, path.x0, v, i / partition.m, at_wp))
    return np.stack(out)


def piece_sums_lower(path: WalkPath, partition: Partition, v) -> np.ndarray:
    """Piece sums ``Ybar_i`` transported back along ``gamma_v``, shape (m, D).

    Raises :class:`CutLocusError` if a cut point is antipodal to its
    waypoint on ``gamma_v``.
    """
    partition.validate(path.support_radius, path.manifold)
    return _lower_pullback(path, partition, v, _local_sums(path, partition))


def lower_pieces(path: WalkPath, partition: Partition, v) -> np.ndarray:
    """Transported pullbacks ``vbar_i`` of the piece endpoints, shape (m, D)."""
    last = [p[-1] for p in tangent_pullbacks(path, partition)]
    return _lower_pullback(path, partition, v, last)


def reconstruct_upper(manifold: Manifold, x0, vs) -> np.ndarray:
    """Endpoint of the piecewise geodesic with segment ``i`` following the transported ``v_i`` for time ``1/m``.

    Each ``v_i`` is carried along the path constructed so far.
    """
    vs = np.array(vs, dtype=float)
    m = len(vs)
    y = np.asarray(x0, dtype=float)
    for i in range(m):
        step = vs[i] / m
        y_next = manifold.exp(y, step)
        if i + 1 < m:
            vs[i + 1 :] = manifold.transport_along(y[None, :], step[None, :], vs[i + 1 :])
        y = y_next
    return y


def reconstruct_lower(manifold: Manifold, x0, v, vs) -> np.ndarray:
    """Recursive map: ``y_{k+1} = exp(y_k, tau_{x_k y_k} tau_{gamma_v; x0 x_k} v_{k+1})``.

    ``x_k = gamma_v(k/m)`` and ``tau_{x_k y_k}`` uses the minimizing geodesic.
    """
    vs = np.asarray(vs, dtype=float)
    m = len(vs)
    x0 = np.asarray(x0, dtype=float)
    wp = geodesic_waypoints(manifold, x0, v, m)
    y = x0
    for k in range(m):
        w = _along_to(manifold, x0, v, k / m, vs[k])
        w = manifold.transport(wp[k], y, w)
        y = manifold.exp(y, w)
    return y


def pulled_back_increments(path: WalkPath) -> np.ndarray:
    """``tau^{-1}_{x0 S_{k-1}} X_k`` for all ``k``, shape (n, D)."""
    return path.manifold.transport(path.points[:-1], path.x0[None, :], path.increments)


def tangent_discrepancy(path: WalkPath, l: int | None = None):
    """``|log(x0, S_l) - n^{-1/2} sum_{k<=l} theta_k tau^{-1}_{x0 S_{k-1}} X_k|``.

    With ``l=None`` returns the array over ``l = 1 .. n``.
    """
    m = path.manifold
    n = path.n
    upto = n if l is None else int(l)
    if not 1 <= upto <= n:
        raise ConfigError(f"l must be in 1..{n}")
    back = m.transport(path.points[:upto], path.x0[None, :], path.increments[:upto])
    walk = np.cumsum((path.row.theta[:upto] / math.sqrt(n))[:, None] * back, axis=0)
    logs = m.log(path.x0[None, :], path.points[1 : upto + 1])
    d = m.norm(path.x0[None, :], logs - walk)
    return d if l is None else float(d[-1])
