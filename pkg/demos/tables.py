"""Median behaviour over planted instances at two noise levels.

This reruns the benchmark tables behind ``mgcd bench`` with a few seeds and
prints, per size, the median residual, the median distances, and how often a
plain pivot threshold would have found the planted degree.
"""

from mgcd.cli import bench_rows

for table in (1, 2):
    _, rows = bench_rows(table, 5)
    print(f"table {table}")
    print("   n   m   k     eta   residual   |v-v~|     |g-g~|   rank hits")
    for n, m, k, eta, seeds, res, vd, gd, wall, hits, fails in rows:
        print(f"{n:4d}{m:4d}{k:4d}  {eta:.0e}  {res:.1e}  {vd:.1e}  {gd:.1e}   {hits}/{seeds}")
