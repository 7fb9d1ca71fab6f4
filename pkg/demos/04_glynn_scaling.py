"""
How Glynn's formula scales
==========================

Gray-code traversal flips one sign per step and updates the n row sums in
O(n), so each extra dimension should roughly double the run time.
"""

import time

from permprob import generate, perm_glynn, perm_naive

prev = None
for n in range(16, 25):
    a = generate("uniform", n, seed=0)
    perm_glynn(a)
    t0 = time.perf_counter()
    perm_glynn(a)
    dt = time.perf_counter() - t0
    ratio = f"{dt / prev:.2f}" if prev else "-"
    print(f"glynn n={n:2d}  {dt * 1e3:8.2f} ms  ratio {ratio}")
    prev = dt

# %%
# The definition costs n! instead: each step multiplies the time by about n.
prev = None
for n in range(7, 12):
    a = generate("uniform", n, seed=0)
    perm_naive(a)
    t0 = time.perf_counter()
    perm_naive(a)
    dt = time.perf_counter() - t0
    ratio = f"{dt / prev:.1f}" if prev else "-"
    print(f"naive n={n:2d}  {dt * 1e3:8.2f} ms  ratio {ratio}")
    prev = dt
