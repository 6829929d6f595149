"""
Widths of small labeled graphs
==============================

Treewidth, pathwidth and proper-pathwidth on a few familiar graphs, then the
distribution of all three over every labeled graph on five vertices.
"""

# %%
import numpy as np

from ktcount.graph import LabeledGraph, complete_graph, cycle_graph, graph_from_index, num_pairs, path_graph
from ktcount.widths import check_ppd, proper_path_decomposition, width_report

# %% [markdown]
# Proper-pathwidth can exceed pathwidth.  Paths and cycles do not show it;
# the star K_{1,3} does: three bags sharing the centre break properness.

# %%
star = LabeledGraph.from_edges(4, [(1, 2), (1, 3), (1, 4)])
for name, g in [("P4", path_graph(4)), ("C5", cycle_graph(5)), ("K4", complete_graph(4)), ("K1,3", star)]:
    print(name, width_report(g))

# %%
spider = LabeledGraph.from_edges(7, [(1, 2), (2, 3), (1, 4), (4, 5), (1, 6), (6, 7)])
d = proper_path_decomposition(spider)
print("spider", width_report(spider))
print("bags", [sorted(b) for b in d.bags])
print("certificate", check_ppd(spider, d))

# %% [markdown]
# Joint distribution over all 1024 labeled graphs with n = 5.

# %%
n = 5
table = np.zeros((n, n, n), dtype=np.int64)
for code in range(1 << num_pairs(n)):
    r = width_report(graph_from_index(n, code))
    table[r.tw, r.pw, r.ppw] += 1

print("tw histogram ", table.sum(axis=(1, 2)))
print("pw histogram ", table.sum(axis=(0, 2)))
print("ppw histogram", table.sum(axis=(0, 1)))

# ppw >= pw >= tw everywhere
tw, pw, ppw = np.nonzero(table)
assert np.all(ppw >= pw) and np.all(pw >= tw)
print("graphs with ppw > pw:", int(sum(table[a, b, c] for a, b, c in zip(tw, pw, ppw) if c > b)))
