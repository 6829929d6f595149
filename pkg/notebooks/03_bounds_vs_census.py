"""
Bounds against exact counts
===========================

Exact T_{n,k} from the census next to Eqs. (1), (3) and Theorem 2, on a log
scale.  The Theorem 2 constant is far from tight at this size; the point is
that every inequality holds instance by instance.
"""

# %%
import math

import numpy as np

from ktcount.bounds import choose_block_size, lb_eq3, lb_thm2, ub_eq1
from ktcount.census import treewidth_histogram

# %%
rows = []
for n in range(3, 7):
    hist = np.array(treewidth_histogram(n))
    cum = np.cumsum(hist)
    for k in range(1, n):
        T = int(cum[k])
        lo = lb_thm2(n, k).lo if k >= 2 else None
        rows.append((n, k, lb_eq3(n, k), T, ub_eq1(n, k), lo))

print(f"{'n':>2} {'k':>2} {'log2 eq3':>9} {'log2 T':>8} {'log2 eq1':>9} {'log2 thm2':>10}")
for n, k, a, T, b, lo in rows:
    thm2 = f"{math.log2(lo):10.2f}" if lo else " " * 10
    print(f"{n:2d} {k:2d} {math.log2(a):9.2f} {math.log2(T):8.2f} {math.log2(b):9.2f} {thm2}")
    assert a <= T <= b and (lo is None or lo <= T)

# %% [markdown]
# Theorem 2 with a natural logarithm instead of log base 2.

# %%
for k in (2, 3, 4, 8):
    a, b = lb_thm2(12, k).lo, lb_thm2(12, k, "e").lo
    print(f"k={k}: base-2 / natural = {float(a / b):.4g}")

# %%
print({k: choose_block_size(k).s for k in (2, 4, 8, 12, 20, 64)})
