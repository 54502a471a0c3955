"""Multiplication by g in C[x]/(f), built two ways.

The Barnett route assembles the matrix from Bezout matrices without any
polynomial division; the reference route reduces g * x^j mod f column by
column. The two agree to rounding, and the eigenvalues of the matrix are g
evaluated at the roots of f.
"""

import numpy as np

from mgcd.bezout import barnett_mult_matrix
from mgcd.poly import Polynomial, evaluate
from mgcd.testkit import brute_force_mult_matrix

roots = np.array([1.0, 2.0, -0.5 + 1j, -0.5 - 1j])
f = Polynomial.from_roots(roots)
g = Polynomial([0.3, -1.0, 2.0])

M = barnett_mult_matrix(f, g)
B = brute_force_mult_matrix(f, g)
print("Barnett vs division, relative difference:",
      f"{np.linalg.norm(M - B) / np.linalg.norm(B):.1e}")

eig = np.sort_complex(np.linalg.eigvals(M))
expected = np.sort_complex(evaluate(g, roots))
print("eigenvalues     :", np.round(eig, 10))
print("g at roots of f :", np.round(expected, 10))

h = Polynomial.from_roots([1.0, 2.0, 7.0])
s = np.linalg.svd(barnett_mult_matrix(f, h), compute_uv=False)
print("singular values when g shares the roots 1 and 2 with f:", np.array2string(s, precision=2))
