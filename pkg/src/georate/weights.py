"""Weight rows: uniform points on the unit sphere S^(n-1) and their scaling."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class WeightRow:
    """A unit vector ``theta`` of length ``n`` plus the seed that produced it."""

    theta: np.ndarray
    seed: int | None = None
    n: int = field(init=False)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if theta.ndim != 1 or theta.size == 0:
            raise ConfigError("a weight row must be a non-empty 1-D vector")
        norm = np.linalg.norm(theta)
        if abs(norm - 1.0) > 1e-12:
            raise ConfigError(f"weight row must have unit norm, got {norm!r}")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "n", theta.size)

    @classmethod
    def normalized(cls, values, seed=None) -> "WeightRow":
        v = np.asarray(values, dtype=float)
        return cls(v / np.linalg.norm(v), seed)

    def scaled(self) -> np.ndarray:
        return scale(self)

    def prefix_l1(self) -> np.ndarray:
        """Cumulative sums of |theta_i|; bounded by sqrt(k) at prefix length k."""
        return np.cumsum(np.abs(self.theta))


def sample_row(n: int, rng: np.random.Generator, seed: int | None = None) -> WeightRow:
    """Uniform point on S^(n-1) by normalizing ``n`` standard normals."""
    if n < 1:
        raise ConfigError(f"weight rows need n >= 1, got {n}")
    g = rng.standard_normal(n)
    norm = np.linalg.norm(g)
    while norm == 0.0:  # pragma: no cover - probability zero
        g = rng.standard_normal(n)
        norm = np.linalg.norm(g)
    theta = g / norm
    # a second pass brings the norm to 1 within a couple of ulps
    theta = theta / np.linalg.norm(theta)
    return WeightRow(theta, seed)


def row_from_seed(n: int, seed: int) -> WeightRow:
    return sample_row(n, np.random.default_rng(seed), seed)


def scale(row: WeightRow) -> np.ndarray:
    """Scaled weights ``alpha_i = theta_i / sqrt(n)``."""
    return row.theta / math.sqrt(row.n)


def max_weight_threshold(n: int, factor: float = 4.5) -> float:
    """Level above which ``max |theta_i|`` is flagged as atypical.

    ``sqrt(n) theta_i`` is close to standard normal, so exceeding
    ``factor * sqrt(2 log n) / sqrt(n)`` has probability below
    ``n * erfc(factor * sqrt(log n))``.
    """
    if n < 2:
        return 1.0
    return factor * math.sqrt(2.0 * math.log(n)) / math.sqrt(n)


def is_atypical(row: WeightRow, factor: float = 4.5) -> bool:
    return bool(np.max(np.abs(row.theta)) > max_weight_threshold(row.n, factor))


def write_rows_csv(path, rows) -> None:
    """One weight row per line, 17 significant digits (exact round trip)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow([repr(float(t)) for t in row.theta])


def read_rows_csv(path) -> list[WeightRow]:
    rows = []
    with Path(path).open(newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec:
                continue
            try:
                rows.append(WeightRow.normalized([float(t) for t in rec]))
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return rows
