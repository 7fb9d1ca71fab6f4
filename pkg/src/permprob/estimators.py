"""Monte Carlo permanent estimators.

For i.i.d. x_i with zero mean and unit variance,

    perm(A) = E[ prod_i x_i * (A x)_i ],

so averaging the kernel over draws gives an unbiased estimate. Three laws
are provided: Rademacher (+-1), standard Gaussian, and a sine-weighted law
where x_i = sin(theta_i), theta_i uniform on [0, 2pi), with an importance
weight of 2 per coordinate (E[2 sin^2] = 1, so the kernel stays unbiased).

Random streams: samples are cut into fixed-size blocks, and block b of
stream k draws from ``SeedSequence(seed, spawn_key=(k, b))``. The result is
therefore identical for every worker count, not only for a fixed one.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .matrix import as_array

__all__ = [
    "Distribution",
    "EstimateReport",
    "estimator_kernel",
    "draw",
    "sample_estimate",
    "variance_profile",
    "moment_check",
    "summarize",
    "block_rng",
    "sample_values",
]

BLOCK_SIZE = 1 << 16


class Distribution(str, enum.Enum):
    RADEMACHER = "rademacher"
    GAUSSIAN = "gaussian"
    SINE = "sine"

    @property
    def weight(self) -> float:
        """Importance weight applied per coordinate."""
        return 2.0 if self is Distribution.SINE else 1.0

    @classmethod
    def coerce(cls, value) -> "Distribution":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "").replace("-", "")
        if key in ("sineweighted", "sin"):
            return cls.SINE
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(d.value for d in cls)
            raise ValueError(f"unknown distribution {value!r} (expected one of {names})") from None


@dataclass(frozen=True)
class EstimateReport:
    estimate: float
    stderr: float
    samples: int
    seed: int
    dist: str | None = None

    @property
    def ci95_low(self) -> float:
        return self.estimate - 1.96 * self.stderr

    @property
    def ci95_high(self) -> float:
        return self.estimate + 1.96 * self.stderr

    def covers(self, value, sigmas=4.0) -> bool:
        """True if `value` lies within `sigmas` standard errors of the estimate."""
        return abs(self.estimate - value) <= sigmas * self.stderr

    def to_dict(self):
        d = asdict(self)
        d["ci95_low"] = self.ci95_low
        d["ci95_high"] = self.ci95_high
        return d


def summarize(values, seed, dist=None) -> EstimateReport:
    """Mean and standard error (N - 1 denominator) of per-sample values."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    if n < 2:
        raise ValueError("need at least 2 samples for a standard error")
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(n))
    return EstimateReport(mean, stderr, n, int(seed), dist)


def estimator_kernel(a, x, weight: float = 1.0) -> float:
    """weight * prod_i [ x_i * sum_j a_ij x_j ]."""
    arr = as_array(a)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (arr.shape[0],):
        raise ValueError(f"x must have length {arr.shape[0]}")
    if weight <= 0:
        raise ValueError("weight must be positive")
    p = weight
    for xi, ri in zip(x, arr @ x):
        p *= xi * ri
    return float(p)


def block_rng(seed: int, stream: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream, block))))


def draw(dist, rng: np.random.Generator, size):
    """Raw draws from `dist` and the per-coordinate importance weight."""
    dist = Distribution.coerce(dist)
    if dist is Distribution.RADEMACHER:
        x = 2.0 * rng.integers(0, 2, size=size) - 1.0
    elif dist is Distribution.GAUSSIAN:
        x = rng.standard_normal(size)
    else:
        x = np.sin(rng.uniform(0.0, 2.0 * np.pi, size=size))
    return x, dist.weight


def sample_values(block_fn, n_samples, seed, stream=0, workers=1):
    """Per-sample values from ``block_fn(rng, size)``, in sample-index order.

    Blocks of BLOCK_SIZE samples each get their own generator, so the output
    does not depend on `workers`.
    """
    starts = list(range(0, n_samples, BLOCK_SIZE))
    values = np.empty(n_samples)

    def run(b):
        lo = starts[b]
        hi = min(lo + BLOCK_SIZE, n_samples)
        values[lo:hi] = block_fn(block_rng(seed, stream, b), hi - lo)

    if workers <= 1:
        for b in range(len(starts)):
            run(b)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, range(len(starts))))
    return values


def check_sampling_args(n_samples, seed):
    if n_samples < 2:
        raise ValueError("N must be >= 2")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")


def sample_estimate(a, dist="gaussian", n_samples: int = 100_000, seed: int = 0, *,
                    workers: int = 1, stream: int = 0) -> EstimateReport:
    """Unbiased Monte Carlo estimate of perm(a) from `n_samples` draws."""
    check_sampling_args(n_samples, seed)
    arr = np.ascontiguousarray(as_array(a))
    dist = Distribution.coerce(dist)
    n = arr.shape[0]

    def block(rng, size):
        x, w = draw(dist, rng, (size, n))
        return w**n * np.prod(x * (x @ arr.T), axis=1)

    values = sample_values(block, int(n_samples), seed, stream, workers)
    return summarize(values, seed, dist.value)


def variance_profile(a, dists=tuple(Distribution), n_samples: int = 100_000, seed: int = 0,
                     *, workers: int = 1) -> list[EstimateReport]:
    """One estimate per distribution; row k uses random stream k + 1."""
    return [
        sample_estimate(a, d, n_samples, seed, workers=workers, stream=k + 1)
        for k, d in enumerate(dists)
    ]


def moment_check(dist, n_samples: int = 1_000_000, seed: int = 0):
    """Weighted sample mean and second moment of raw draws.

    Both are scaled by the per-coordinate weight, so a valid law gives
    values near 0 and 1.
    """
    check_sampling_args(n_samples, seed)
    x, w = draw(dist, block_rng(seed, 0, 0), n_samples)
    return float(w * x.mean()), float(w * np.mean(x * x))
