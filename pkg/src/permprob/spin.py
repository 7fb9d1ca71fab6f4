"""Spin partition functions and the hyperbolic-cosine route to the permanent.

Sign convention: everything here uses

    Z(W) = sum_{s in {+-1}^n} exp(+(beta/2) s^T W s).

The physics convention exp(-(beta/2) s^T J s) maps onto this with
W = -J; with J = -XA (interaction x_i a_ij) the two minus signs cancel and
perm(A) is the x_1...x_n coefficient of Z(XA) at beta = 1.

For a symmetric positive definite W, completing the square gives
Z(W) = E[prod_i 2 cosh(phi_i)] with phi ~ N(0, W), which
:func:`cosh_moment_mc` estimates by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .errors import NotPositiveDefinite, NotSymmetric, OverflowToInfinity, check_size
from .estimators import EstimateReport, check_sampling_args, sample_values, summarize
from .exact import sign_vectors
from .matrix import as_array

__all__ = [
    "SpinSystem",
    "MvnSampler",
    "partition_function",
    "partition_function_direct",
    "spin_coefficient_exact",
    "perm_spin_fd",
    "build_mvn_sampler",
    "cosh_moment_mc",
]

PARTITION_MAX_N = 20
FD_MAX_N = 10
_MAX_EXPONENT = math.log(np.finfo(np.float64).max)


@dataclass(frozen=True)
class SpinSystem:
    """Coupling matrix W and inverse temperature; weights are exp(+beta/2 s^T W s)."""

    W: np.ndarray
    beta: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "W", as_array(self.W))
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    @property
    def n(self):
        return self.W.shape[0]


@nb.njit(cache=True, nogil=True)
def _partition_kernel(w, half_beta):
    n = w.shape[0]
    s = np.ones(n)
    sym = w + w.T
    # u_i = sum_k (w_ik + w_ki) s_k
    u = sym.sum(axis=1)
    q = w.sum()
    e = half_beta * q
    max_e = e
    total = math.exp(e)
    for k in range(1, 1 << n):
        j = 0
        while ((k >> j) & 1) == 0:
            j += 1
        old = s[j]
        q -= 2.0 * old * (u[j] - 2.0 * w[j, j] * old)
        s[j] = -old
        for i in range(n):
            u[i] -= 2.0 * old * sym[i, j]
        e = half_beta * q
        if e > max_e:
            max_e = e
        total += math.exp(e)
    return total, max_e


def _system(sys_or_w, beta):
    if isinstance(sys_or_w, SpinSystem):
        return sys_or_w
    return SpinSystem(sys_or_w, beta)


def _check_overflow(total, max_e):
    if max_e > _MAX_EXPONENT or not math.isfinite(total):
        raise OverflowToInfinity(f"partition function overflows float64 (largest exponent {max_e:.4g})")
    return total


def partition_function(sys, beta: float = 1.0, *, max_n: int = PARTITION_MAX_N) -> float:
    """Z = sum_s exp(beta/2 s^T W s) over all 2**n spin vectors.

    Spins are visited in Gray-code order and the quadratic form is updated
    in O(n) per flip. `sys` is a :class:`SpinSystem` or a coupling matrix.
    """
    sys = _system(sys, beta)
    check_size("partition_function", sys.n, max_n)
    total, max_e = _partition_kernel(np.ascontiguousarray(sys.W), 0.5 * sys.beta)
    return _check_overflow(total, max_e)


def partition_function_direct(sys, beta: float = 1.0, *, max_n: int = PARTITION_MAX_N) -> float:
    """Same sum as :func:`partition_function`, each quadratic form evaluated from scratch."""
    sys = _system(sys, beta)
    check_size("partition_function_direct", sys.n, max_n)
    s = sign_vectors(sys.n)
    e = 0.5 * sys.beta * np.einsum("ki,ij,kj->k", s, sys.W, s)
    with np.errstate(over="ignore"):
        total = float(np.exp(e).sum())
    return _check_overflow(total, float(e.max()))


def spin_coefficient_exact(a, *, max_n: int = PARTITION_MAX_N) -> float:
    """sum_s prod_i (1/2) s_i (A s)_i -- the exact x_1...x_n coefficient of Z(XA)."""
    arr = as_array(a)
    check_size("spin_coefficient_exact", arr.shape[0], max_n)
    s = sign_vectors(arr.shape[0])
    return float(np.prod(0.5 * s * (s @ arr.T), axis=1).sum())


@nb.njit(cache=True, nogil=True)
def _fd_kernel(a, h):
    n = a.shape[0]
    s = np.ones(n)
    r = a.sum(axis=1)
    total = 0.0
    for k in range(1 << n):
        if k:
            j = 0
            while ((k >> j) & 1) == 0:
                j += 1
            s[j] = -s[j]
            twice = 2.0 * s[j]
            for i in range(n):
                r[i] += twice * a[i, j]
        p = 1.0
        for i in range(n):
            p *= np.expm1(0.5 * h * s[i] * r[i]) / h
        total += p
    return total


def perm_spin_fd(a, h: float = 1e-3, *, literal: bool = False, max_n: int = FD_MAX_N) -> float:
    """Approximate perm(a) by a mixed forward difference of F(x) = Z(diag(x) a).

    Computes h**-n sum_{S} (-1)**(n-|S|) F(h 1_S), which is perm(a) + O(h).
    For a fixed spin vector the exponent is linear in x, so the alternating
    sum factorises into prod_i expm1(h c_i) with c_i = s_i (a s)_i / 2;
    that form is used by default because it avoids the catastrophic
    cancellation of the 2**n-term alternating sum. ``literal=True``
    evaluates the alternating sum of partition functions as written.
    """
    arr = as_array(a)
    n = arr.shape[0]
    check_size("perm_spin_fd", n, max_n)
    if not 0 < h <= 0.1:
        raise ValueError("h must satisfy 0 < h <= 0.1")
    if not literal:
        return float(_fd_kernel(np.ascontiguousarray(arr), float(h)))

    total = 0.0
    for mask in range(1 << n):
        x = np.array([h if (mask >> i) & 1 else 0.0 for i in range(n)])
        sign = -1.0 if (n - bin(mask).count("1")) % 2 else 1.0
        total += sign * partition_function(x[:, None] * arr)
    return total / h**n


# -- multivariate normal -------------------------------------------------------

@dataclass(frozen=True)
class MvnSampler:
    """Draws phi = L z, z standard normal, so that cov(phi) = L L^T = W."""

    W: np.ndarray
    chol: np.ndarray

    @property
    def n(self):
        return self.W.shape[0]

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        z = rng.standard_normal((size, self.n))
        return z @ self.chol.T


def build_mvn_sampler(w) -> MvnSampler:
    """Cholesky-factor a covariance matrix.

    A zero pivot whose remaining column is also exactly zero gives a
    degenerate coordinate (phi_i = 0 always) instead of an error.
    """
    w = as_array(w)
    n = w.shape[0]
    scale = np.abs(w).max()
    if np.abs(w - w.T).max() > 1e-12 * scale:
        raise NotSymmetric("covariance matrix must be symmetric")

    L = np.zeros((n, n))
    for j in range(n):
        d = w[j, j] - L[j, :j] @ L[j, :j]
        col = w[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]
        if d > 0:
            L[j, j] = math.sqrt(d)
            L[j + 1:, j] = col / L[j, j]
        elif d == 0 and not np.any(col):
            continue
        else:
            raise NotPositiveDefinite(f"pivot {j + 1} is {d:.6g}; matrix is not positive definite")
    L.setflags(write=False)
    return MvnSampler(w, L)


def cosh_moment_mc(w, n_samples: int = 100_000, seed: int = 0, *, workers: int = 1) -> EstimateReport:
    """Monte Carlo estimate of E[prod_i 2 cosh(phi_i)], phi ~ N(0, w).

    For symmetric positive definite `w` the target equals
    ``partition_function(w)``.
    """
    check_sampling_args(n_samples, seed)
    sampler = w if isinstance(w, MvnSampler) else build_mvn_sampler(w)

    def block(rng, size):
        return np.prod(2.0 * np.cosh(sampler.sample(rng, size)), axis=1)

    return summarize(sample_values(block, int(n_samples), seed, workers=workers), seed, "mvn")
