"""
Permanents and spin partition functions
=======================================

With Z(W) = sum over s in {+1,-1}^n of exp(s^T W s / 2), the permanent of A
is the coefficient of x_1 ... x_n in Z(diag(x) A). For symmetric positive
definite W, Z(W) is also E[prod_i 2 cosh(phi_i)] with phi ~ N(0, W).
"""

import numpy as np

from permprob import cosh_moment_mc, generate, partition_function, perm_glynn, perm_spin_fd
from permprob.spin import spin_coefficient_exact

# %%
# Coefficient extraction by a mixed forward difference: error is O(h).
a = generate("uniform", 4, seed=0)
exact = perm_glynn(a)
print(f"perm(A) = {exact:.8f}")
print(f"exact x1..xn coefficient = {spin_coefficient_exact(a):.8f}")
for h in (1e-1, 1e-2, 1e-3):
    v = perm_spin_fd(a, h)
    print(f"h={h:.0e}  estimate={v:.8f}  error={abs(v - exact):.2e}")

# %%
# The Gaussian side of the identity, checked by sampling.
w = generate("spd", 3, seed=4)
z = partition_function(w)
rep = cosh_moment_mc(w, 10**6, seed=1)
print(f"\nZ(W) by enumeration   {z:.5f}")
print(f"E[prod 2 cosh phi]    {rep.estimate:.5f} +- {rep.stderr:.5f}")

# %%
# Not every coupling is a covariance: (0 1; 1 0) has eigenvalues +-1.
try:
    cosh_moment_mc(np.array([[0.0, 1.0], [1.0, 0.0]]), 100, 0)
except Exception as exc:
    print(f"\n{type(exc).__name__}: {exc}")
