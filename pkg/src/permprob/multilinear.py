"""Square-free polynomial algebra and the MacMahon route to the permanent.

A :class:`SubsetPolynomial` in n variables lives in R[x_1..x_n]/(x_i**2):
its 2**n coefficients are indexed by bit masks, entry S being the
coefficient of prod_{i in S} x_i. Extracting the x_1...x_n coefficient of
1/det(I - XA), X = diag(x), only ever needs square-free monomials, so
computing in this quotient ring is exact rather than a truncation.
"""

from __future__ import annotations

import numba as nb
import numpy as np

from .errors import DimensionMismatch, NonInvertible, check_size
from .matrix import as_array

__all__ = [
    "SubsetPolynomial",
    "subset_multiply",
    "det_minor_expansion",
    "series_inverse",
    "perm_macmahon",
]

MACMAHON_MAX_N = 16
PIVOT_FLOOR = 1e-300


class SubsetPolynomial:
    """Multilinear polynomial with coefficients indexed by subset bit masks.

    Bit i-1 of a mask stands for the variable x_i.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n, coeffs=None):
        n = int(n)
        if n < 0:
            raise ValueError("number of variables must be >= 0")
        if coeffs is None:
            coeffs = np.zeros(2**n)
        coeffs = np.array(coeffs, dtype=np.float64)
        if coeffs.shape != (2**n,):
            raise ValueError(f"expected {2**n} coefficients, got shape {coeffs.shape}")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        self.n = n
        self.coeffs = coeffs

    @classmethod
    def constant(cls, n, value=1.0):
        p = cls(n)
        p.coeffs[0] = value
        return p

    @classmethod
    def from_terms(cls, n, terms):
        """Build from ``{(i, j, ...): coeff}`` with 1-based variable indices."""
        p = cls(n)
        for vars_, c in terms.items():
            mask = 0
            for i in vars_:
                if not 1 <= i <= n:
                    raise ValueError(f"variable index {i} out of range 1..{n}")
                if mask >> (i - 1) & 1:
                    # x_i**2 = 0
                    mask = -1
                    break
                mask |= 1 << (i - 1)
            if mask >= 0:
                p.coeffs[mask] += c
        return p

    def __getitem__(self, subset):
        """Coefficient of a monomial given as an int mask or 1-based indices."""
        if isinstance(subset, (int, np.integer)):
            return float(self.coeffs[subset])
        mask = 0
        for i in subset:
            mask |= 1 << (i - 1)
        return float(self.coeffs[mask])

    @property
    def top(self):
        """Coefficient of x_1 x_2 ... x_n."""
        return float(self.coeffs[-1])

    def evaluate(self, x):
        """Value at the point x (length n)."""
        x = np.asarray(x, dtype=np.float64)
        monomials = np.ones(1)
        for xi in x:
            monomials = np.concatenate([monomials, monomials * xi])
        return float(monomials @ self.coeffs)

    def _check(self, other):
        if not isinstance(other, SubsetPolynomial):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"polynomials in {self.n} and {other.n} variables")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return SubsetPolynomial(self.n, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return SubsetPolynomial(self.n, self.coeffs - other.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return SubsetPolynomial(self.n, self.coeffs * other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return subset_multiply(self, other)

    __rmul__ = __mul__

    def __repr__(self):
        return f"SubsetPolynomial(n={self.n}, coeffs={self.coeffs.tolist()!r})"


@nb.njit(cache=True, nogil=True)
def _subset_convolve(f, g):
    out = np.empty_like(f)
    for s in range(f.shape[0]):
        acc = 0.0
        t = s
        while True:
            acc += f[t] * g[s ^ t]
            if t == 0:
                break
            t = (t - 1) & s
        out[s] = acc
    return out


def subset_multiply(f: SubsetPolynomial, g: SubsetPolynomial) -> SubsetPolynomial:
    """Product in the square-free ring: (fg)(S) = sum_{T <= S} f(T) g(S \\ T).

    O(3**n) by enumerating submasks of every mask.
    """
    if f.n != g.n:
        raise DimensionMismatch(f"polynomials in {f.n} and {g.n} variables")
    return SubsetPolynomial(f.n, _subset_convolve(f.coeffs, g.coeffs))


@nb.njit(cache=True, nogil=True)
def _det_partial_pivot(m, floor):
    # m is destroyed
    k = m.shape[0]
    det = 1.0
    for c in range(k):
        p = c
        best = abs(m[c, c])
        for r in range(c + 1, k):
            if abs(m[r, c]) > best:
                best = abs(m[r, c])
                p = r
        if best <= floor:
            return 0.0
        if p != c:
            for j in range(c, k):
                tmp = m[c, j]
                m[c, j] = m[p, j]
                m[p, j] = tmp
            det = -det
        piv = m[c, c]
        det *= piv
        for r in range(c + 1, k):
            factor = m[r, c] / piv
            if factor != 0.0:
                for j in range(c + 1, k):
                    m[r, j] -= factor * m[c, j]
    return det


@nb.njit(cache=True, nogil=True)
def _principal_minor_coeffs(a, floor):
    n = a.shape[0]
    out = np.empty(1 << n)
    out[0] = 1.0
    idx = np.empty(n, dtype=np.int64)
    for mask in range(1, 1 << n):
        k = 0
        for i in range(n):
            if (mask >> i) & 1:
                idx[k] = i
                k += 1
        sub = np.empty((k, k))
        for r in range(k):
            for c in range(k):
                sub[r, c] = a[idx[r], idx[c]]
        d = _det_partial_pivot(sub, floor)
        out[mask] = -d if k % 2 else d
    return out


def det_minor_expansion(a, *, max_n: int = MACMAHON_MAX_N) -> SubsetPolynomial:
    """det(I - XA) as a multilinear polynomial in x_1..x_n.

    Coefficient of S is (-1)**|S| det(A_S), A_S the principal submatrix on
    S. Each minor is computed by partial-pivoted elimination; a pivot at or
    below 1e-300 in magnitude makes the minor exactly 0.
    """
    arr = as_array(a)
    n = arr.shape[0]
    check_size("det_minor_expansion", n, max_n)
    return SubsetPolynomial(n, _principal_minor_coeffs(np.ascontiguousarray(arr), PIVOT_FLOOR))


@nb.njit(cache=True, nogil=True)
def _inverse_kernel(f):
    g = np.empty_like(f)
    inv0 = 1.0 / f[0]
    g[0] = inv0
    # numeric mask order visits every proper subset of S before S
    for s in range(1, f.shape[0]):
        acc = 0.0
        t = s
        while t:
            acc += f[t] * g[s ^ t]
            t = (t - 1) & s
        g[s] = -inv0 * acc
    return g


def series_inverse(f: SubsetPolynomial) -> SubsetPolynomial:
    """Multiplicative inverse in the square-free ring.

    Raises NonInvertible when the constant term is zero.
    """
    if f.coeffs[0] == 0.0:
        raise NonInvertible("constant coefficient is zero")
    return SubsetPolynomial(f.n, _inverse_kernel(f.coeffs))


def perm_macmahon(a, *, max_n: int = MACMAHON_MAX_N) -> float:
    """Permanent as the x_1...x_n coefficient of 1/det(I - XA).

    The constant term of det(I - XA) is 1, so no condition on det(A) is
    needed; singular matrices are fine.
    """
    return series_inverse(det_minor_expansion(a, max_n=max_n)).top
