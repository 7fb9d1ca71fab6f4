"""Exact permanents.

Three routes, all returning float64:

* :func:`perm_naive` -- the defining sum over all n! permutations;
* :func:`perm_delta_oracle` -- the same sum written over all n**n index
  tuples, filtered by the permutation tensor;
* :func:`perm_glynn` -- Glynn's signed average over the 2**(n-1) sign vectors
  with the first sign pinned to +1, traversed in Gray-code order.

:func:`rademacher_full_enumeration` is the unpinned average over all 2**n
sign vectors, i.e. the expectation of the estimator kernel under the
Rademacher law, evaluated exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numba as nb
import numpy as np

from .errors import check_size
from .matrix import as_array

__all__ = [
    "perm_naive",
    "permutation_tensor",
    "delta_via_enumeration",
    "perm_delta_oracle",
    "perm_glynn",
    "rademacher_full_enumeration",
    "sign_vectors",
]

NAIVE_MAX_N = 12
DELTA_MAX_N = 8
DELTA_ORACLE_MAX_N = 7
GLYNN_MAX_N = 30
FULL_ENUM_MAX_N = 20


@nb.njit(cache=True, nogil=True)
def _naive_kernel(a):
    n = a.shape[0]
    perm = np.arange(n)
    prefix = np.empty(n + 1)
    prefix[0] = 1.0
    for i in range(n):
        prefix[i + 1] = prefix[i] * a[i, perm[i]]
    total = prefix[n]
    while True:
        # lexicographic successor
        k = n - 2
        while k >= 0 and perm[k] > perm[k + 1]:
            k -= 1
        if k < 0:
            break
        l = n - 1
        while perm[l] < perm[k]:
            l -= 1
        perm[k], perm[l] = perm[l], perm[k]
        lo, hi = k + 1, n - 1
        while lo < hi:
            perm[lo], perm[hi] = perm[hi], perm[lo]
            lo += 1
            hi -= 1
        # only the suffix from k changed
        for i in range(k, n):
            prefix[i + 1] = prefix[i] * a[i, perm[i]]
        total += prefix[n]
    return total


def perm_naive(a, *, max_n: int = NAIVE_MAX_N) -> float:
    """Permanent by summing over all n! permutations.

    Permutations are visited in lexicographic order and row products are
    cached as prefix products, so each step costs O(1) amortised.
    """
    arr = as_array(a)
    check_size("perm_naive", arr.shape[0], max_n)
    return float(_naive_kernel(np.ascontiguousarray(arr)))


def _check_tuple(m):
    m = tuple(int(v) for v in m)
    n = len(m)
    if n < 1 or any(not 1 <= v <= n for v in m):
        raise ValueError(f"index tuple must have entries in 1..{n}, got {m}")
    return m


def permutation_tensor(m) -> int:
    """1 if the 1-based tuple `m` is a permutation of (1, ..., n), else 0."""
    m = _check_tuple(m)
    return int(sorted(m) == list(range(1, len(m) + 1)))


def sign_vectors(n: int) -> np.ndarray:
    """All 2**n vectors in {+1, -1}**n as the rows of a float array.

    Row k has s_j = -1 exactly where bit j of k is set.
    """
    k = np.arange(2**n)[:, None]
    bits = (k >> np.arange(n)) & 1
    return 1.0 - 2.0 * bits


def delta_via_enumeration(m, *, max_n: int = DELTA_MAX_N) -> float:
    """Permutation tensor as an average over Rademacher sign vectors.

    Evaluates ``2**-n * sum_x prod_i x_i * x_{m_i}`` over all x in {+1,-1}**n.
    Every term is +-1, so the result is exact in floating point.
    """
    m = _check_tuple(m)
    n = len(m)
    check_size("delta_via_enumeration", n, max_n)
    x = sign_vectors(n)
    idx = np.array(m) - 1
    terms = np.prod(x * x[:, idx], axis=1)
    return float(terms.sum() / 2**n)


@nb.njit(cache=True, nogil=True)
def _delta_oracle_kernel(a):
    n = a.shape[0]
    m = np.zeros(n, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    total = 0.0
    while True:
        seen[:] = False
        is_perm = True
        for i in range(n):
            if seen[m[i]]:
                is_perm = False
                break
            seen[m[i]] = True
        if is_perm:
            p = 1.0
            for j in range(n):
                p *= a[j, m[j]]
            total += p
        # odometer increment over {0..n-1}**n
        pos = n - 1
        while pos >= 0:
            m[pos] += 1
            if m[pos] < n:
                break
            m[pos] = 0
            pos -= 1
        if pos < 0:
            break
    return total


def perm_delta_oracle(a, *, max_n: int = DELTA_ORACLE_MAX_N) -> float:
    """Permanent as the sum over all n**n index tuples weighted by the permutation tensor."""
    arr = as_array(a)
    check_size("perm_delta_oracle", arr.shape[0], max_n)
    return float(_delta_oracle_kernel(np.ascontiguousarray(arr)))


# -- Glynn ---------------------------------------------------------------------

@nb.njit(cache=True, nogil=True)
def _glynn_block(a, offset, start, stop, compensated):
    """Sum of prod_i s_i * (A s)_i over Gray-code indices [start, stop).

    Bit b of the Gray code drives column b + offset; columns below `offset`
    stay at +1. Returns (sum, compensation).
    """
    n = a.shape[0]
    s = np.ones(n)
    g = start ^ (start >> 1)
    sign = 1.0
    for b in range(n - offset):
        if (g >> b) & 1:
            s[b + offset] = -1.0
            sign = -sign
    r = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += a[i, j] * s[j]
        r[i] = acc

    total = 0.0
    comp = 0.0
    k = start
    while k < stop:
        p = sign
        for i in range(n):
            p *= r[i]
        if compensated:
            t = total + p
            if abs(total) >= abs(p):
                comp += (total - t) + p
            else:
                comp += (p - t) + total
            total = t
        else:
            total += p
        k += 1
        if k < stop:
            # the bit flipped between gray(k-1) and gray(k) is the lowest set bit of k
            b = 0
            while ((k >> b) & 1) == 0:
                b += 1
            col = b + offset
            s[col] = -s[col]
            sign = -sign
            twice = 2.0 * s[col]
            for i in range(n):
                r[i] += twice * a[i, col]
    return total, comp


def _signed_sum(arr, offset, workers, compensated):
    n = arr.shape[0]
    count = 1 << (n - offset)
    workers = max(1, min(int(workers), count))
    bounds = [count * w // workers for w in range(workers + 1)]
    blocks = list(zip(bounds[:-1], bounds[1:]))
    a = np.ascontiguousarray(arr)
    if workers == 1:
        parts = [_glynn_block(a, offset, lo, hi, compensated) for lo, hi in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _glynn_block(a, offset, b[0], b[1], compensated), blocks))
    # merge in block order so the result depends only on the worker count
    if compensated:
        return math.fsum([x for part in parts for x in part])
    total = 0.0
    for part_sum, _ in parts:
        total += part_sum
    return total


def perm_glynn(a, *, workers: int = 1, compensated: bool = False, max_n: int = GLYNN_MAX_N) -> float:
    """Permanent by Glynn's formula in O(2**(n-1) n) time.

    Sign vectors with s_1 = +1 are visited in reflected Gray-code order over
    s_2..s_n; the row sums (A s)_i are updated in O(n) per flip. With
    ``workers > 1`` the Gray-code range is cut into contiguous blocks summed
    on separate threads and merged in block order, so results are
    reproducible for a fixed worker count. ``compensated`` switches to
    Neumaier summation.
    """
    arr = as_array(a)
    n = arr.shape[0]
    check_size("perm_glynn", n, max_n)
    return _signed_sum(arr, 1, workers, compensated) / 2.0 ** (n - 1)


def rademacher_full_enumeration(a, *, workers: int = 1, compensated: bool = False,
                                max_n: int = FULL_ENUM_MAX_N) -> float:
    """Average of prod_i s_i (A s)_i over all 2**n sign vectors (no pinning)."""
    arr = as_array(a)
    n = arr.shape[0]
    check_size("rademacher_full_enumeration", n, max_n)
    return _signed_sum(arr, 0, workers, compensated) / 2.0**n

