"""Exact gcd from the kernel of the multiplication matrix.

The kernel of M_g has dimension deg gcd(f, g). Its column echelon form
contains the cofactor f / gcd, and one division recovers the gcd. The result
is compared against the Euclidean algorithm.
"""

from mgcd.agcd import exact_gcd
from mgcd.poly import Polynomial, format_poly
from mgcd.testkit import euclid_gcd, plant_separated_instance

f = Polynomial.from_roots([1, 2, 3])
g = Polynomial.from_roots([1, 2, -5])
print("gcd((x-1)(x-2)(x-3), (x-1)(x-2)(x+5)):")
print(format_poly(exact_gcd(f, g)))

for seed in range(5):
    inst = plant_separated_instance(10, 8, 4, seed)
    h, e = exact_gcd(inst.f, inst.g_exact), euclid_gcd(inst.f, inst.g_exact)
    print(f"seed {seed}: kernel degree {h.degree}, Euclid degree {e.degree}")
