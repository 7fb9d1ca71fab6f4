"""
Three exact routes to the permanent
===================================

The permanent of an n x n matrix sums the products a_{1,s(1)} ... a_{n,s(n)}
over every permutation s. This script computes it three independent ways
and checks that they agree.
"""

import math

import numpy as np

from permprob import generate, perm_glynn, perm_macmahon, perm_naive

# %%
# A 2 x 2 warm-up: 1*4 + 2*3 = 10 by every route.
a = np.array([[1.0, 2.0], [3.0, 4.0]])
print("naive   ", perm_naive(a))
print("glynn   ", perm_glynn(a))
print("macmahon", perm_macmahon(a))

# %%
# The all-ones matrix has permanent n!.
for n in (4, 8, 12):
    ones = np.ones((n, n))
    print(f"n={n:2d}  glynn={perm_glynn(ones):.0f}  macmahon={perm_macmahon(ones):.0f}  n!={math.factorial(n)}")

# %%
# On a random matrix the three routes agree to rounding error.
# Glynn's formula averages prod_i s_i (A s)_i over sign vectors s with
# s_1 = +1; the MacMahon route reads off the x_1...x_n coefficient of
# 1/det(I - XA) in the ring where every x_i**2 = 0.
a = generate("uniform", 8, seed=3)
values = {f.__name__: f(a) for f in (perm_naive, perm_glynn, perm_macmahon)}
for name, v in values.items():
    print(f"{name:14s} {v:.15g}")

# %%
# The MacMahon route has no trouble with singular matrices.
s = a.entries.copy()
s[5] = s[2]
print("rank", np.linalg.matrix_rank(s), " naive", perm_naive(s), " macmahon", perm_macmahon(s))
