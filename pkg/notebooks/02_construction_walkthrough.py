"""
The constructible-triple construction
=====================================

Replay one triple step by step, then look at how many triples collapse onto
the same graph.
"""

# %%
from collections import Counter

import numpy as np

from ktcount.bounds import preimage_bound
from ktcount.construction import (
    build_graph,
    compute_D_sets,
    grid_row,
    ppd_witness,
    preimage_counts,
    sample_triple,
    validate_triple,
)
from ktcount.graph import to_graph6
from ktcount.widths import check_ppd

# %%
t = sample_triple(9, 3, 2, seed=np.random.SeedSequence(2024))
trace = validate_triple(t)
print("sigma", t.sigma)
for step in trace.steps:
    if step.active is not None:
        print(f"i={step.i:2d}  A={sorted(step.active)}  anchor={step.anchor}  frozen={step.frozen}  N={sorted(t.left(step.i))}")
print("blocks", trace.blocks())

# %%
H = build_graph(t)
d = ppd_witness(t)
print("graph6", to_graph6(H).decode(), "edges", H.num_edges)
print("witness bags", [sorted(b) for b in d.bags])
print("check", check_ppd(H, d))
print("D sets", {i: sorted(x) for i, x in compute_D_sets(t, H).sets.items()})

# %% [markdown]
# Preimage multiplicities at (7, 3, 3): how many triples give each graph.

# %%
counts = preimage_counts(7, 3, 3)
mult = Counter(counts.values())
print("multiplicity -> number of graphs:", dict(sorted(mult.items())))
print("bound", preimage_bound(7, 3, 3))

# %%
for s in (1, 2, 3):
    r = grid_row(7, 3, s)
    print(f"s={s}: triples={r.triple_count}  lower bound={r.triple_lower_bound}  R={r.R}  max preimages={r.max_preimages}/{r.preimage_bound}")
