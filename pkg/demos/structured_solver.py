"""Displacement structure and the fast pivoted LU.

A multiplication matrix has displacement rank at most 2. After the Fourier
change of basis it becomes Cauchy-like, and the generator-based elimination
factors it in quadratic time while exposing the numerical rank through its
pivots.
"""

import time

import numpy as np

from mgcd.bezout import barnett_mult_matrix
from mgcd.displacement import displaced, generators_of_mult_matrix, toeplitz_to_cauchy
from mgcd.gko import estimate_rank, gko_lu, solve_toeplitz_like
from mgcd.testkit import dense_gepp_solve, plant_instance, random_monic, random_toeplitz_like

rng = np.random.default_rng(0)
f, g = random_monic(12, rng), random_monic(9, rng)
M = barnett_mult_matrix(f, g)
s = np.linalg.svd(displaced(M, -1.0), compute_uv=False)
print("singular values of the displaced matrix:", np.array2string(s[:4] / s[0], precision=1), "...")

A, tg = random_toeplitz_like(64, 2, 1)
b = rng.standard_normal(64) + 0j
x, y = solve_toeplitz_like(tg, b), dense_gepp_solve(A, b)
print(f"structured solve vs GEPP: {np.linalg.norm(x - y) / np.linalg.norm(y):.1e}")

inst = plant_instance(20, 18, 6, 0.0, 3)
lu = gko_lu(toeplitz_to_cauchy(generators_of_mult_matrix(inst.f, inst.g_exact)))
rep = estimate_rank(lu)
print(f"planted gcd degree 6: rank {rep.numerical_rank}, corank {rep.corank}")
print("trailing pivots:", np.array2string(rep.pivot_magnitudes[-8:], precision=1))

for n in (128, 256, 512):
    cg = toeplitz_to_cauchy(generators_of_mult_matrix(random_monic(n, rng), random_monic(n - 1, rng)))
    t0 = time.perf_counter()
    gko_lu(cg)
    print(f"n={n}: factorization {1e3 * (time.perf_counter() - t0):.1f} ms")
