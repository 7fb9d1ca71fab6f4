"""
Estimating a permanent by sampling
==================================

If the x_i are i.i.d. with mean 0 and variance 1, then
E[prod_i x_i (A x)_i] is the permanent. Any such law gives an unbiased
estimator, but the variance differs a lot between laws.
"""

import numpy as np

from permprob import Distribution, generate, moment_check, perm_glynn, variance_profile

a = generate("uniform", 5, seed=1)
exact = perm_glynn(a)
print(f"exact permanent: {exact:.6f}\n")

# %%
# One row per sampling law, from independent random streams.
for rep in variance_profile(a, list(Distribution), n_samples=400_000, seed=7):
    z = (rep.estimate - exact) / rep.stderr
    print(f"{rep.dist:10s} {rep.estimate:+.5f} +- {rep.stderr:.5f}   ({z:+.2f} stderr from exact)")

# %%
# The sine-weighted law uses x = sin(theta), theta uniform on [0, 2pi), and
# multiplies by 2 per coordinate. Its weighted moments match the conditions.
for d in Distribution:
    mean, second = moment_check(d, 10**6, seed=0)
    print(f"{d.value:10s} weighted mean {mean:+.4f}  weighted second moment {second:.4f}")

# %%
# For the identity matrix the Rademacher kernel is identically 1: zero variance.
rep = variance_profile(np.eye(4), [Distribution.RADEMACHER], 1000, 0)[0]
print("\nidentity, rademacher:", rep.estimate, rep.stderr)
