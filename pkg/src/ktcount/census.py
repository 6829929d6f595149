"""Brute-force labeled graph censuses.

Every count here iterates over explicit labeled graphs.  Work is split into
contiguous ranges of graph indices (or of edge-subset ranks), processed by a
pool of worker processes and summed, so the totals do not depend on the
number of workers.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from itertools import combinations, islice, permutations
from math import comb
from pathlib import Path

from .errors import CapacityError
from .graph import LabeledGraph, adjacency_from_code, num_pairs, pair_bit
from .parallel import default_workers, pmap as _map, ranges as _ranges
from .widths import treewidth_adj

CENSUS_MAX_N = 7
LONG_RUN_MAX_N = 8
ENUM_MAX_N = 7
CHUNK = 1 << 12


@dataclass(frozen=True)
class CensusRow:
    n: int
    k: int
    T: int
    elapsed: float
    method: str


# --- partial k-trees --------------------------------------------------------


def _tw_histogram(n: int, lo: int, hi: int) -> list[int]:
    hist = [0] * n
    for code in range(lo, hi):
        hist[treewidth_adj(adjacency_from_code(n, code))] += 1
    return hist


def _count_at_most(n: int, k: int, lo: int, hi: int) -> int:
    return sum(_tw_histogram(n, lo, hi)[: k + 1])


def _check_census_n(n: int, long_run: bool) -> None:
    cap = LONG_RUN_MAX_N if long_run else CENSUS_MAX_N
    if not 1 <= n <= cap:
        hint = "" if long_run else " (n = 8 needs long_run=True)"
        raise CapacityError(f"census supports n <= {cap}{hint}, got n={n}", estimate=2 ** num_pairs(n))


def treewidth_histogram(n: int, workers: int | None = None, long_run: bool = False) -> list[int]:
    """``hist[w]`` = number of labeled ``n``-vertex graphs of treewidth ``w``."""
    _check_census_n(n, long_run)
    total = 1 << num_pairs(n)
    parts = _map(_tw_histogram, [(n, a, b) for a, b in _ranges(total, CHUNK)], workers)
    return [sum(col) for col in zip(*parts)]


def census_T(
    n: int,
    k: int,
    workers: int | None = None,
    checkpoint: str | Path | None = None,
    long_run: bool = False,
) -> CensusRow:
    """Exact ``T_{n,k}``: labeled ``n``-vertex graphs of treewidth at most ``k``.

    With ``checkpoint`` set, progress is written after every batch as JSON
    ``{n, k, next_index, partial_count}`` and a matching file is resumed from.
    """
    _check_census_n(n, long_run)
    if not 0 <= k:
        raise ValueError(f"k must be non-negative, got {k}")
    t0 = time.perf_counter()
    total = 1 << num_pairs(n)
    if k >= n - 1:
        return CensusRow(n, k, total, time.perf_counter() - t0, "trivial")
    if checkpoint is None:
        hist = treewidth_histogram(n, workers, long_run)
        return CensusRow(n, k, sum(hist[: k + 1]), time.perf_counter() - t0, "tw-histogram")

    path = Path(checkpoint)
    start, count = 0, 0
    if path.exists():
        state = json.loads(path.read_text())
        if state.get("n") == n and state.get("k") == k:
            start, count = int(state["next_index"]), int(state["partial_count"])
    workers = default_workers() if workers is None else workers
    chunks = _ranges(total, CHUNK, start)
    batch = max(1, workers) * 4
    for b in range(0, len(chunks), batch):
        part = chunks[b : b + batch]
        count += sum(_map(_count_at_most, [(n, k, lo, hi) for lo, hi in part], workers))
        _write_checkpoint(path, {"n": n, "k": k, "next_index": part[-1][1], "partial_count": count})
    return CensusRow(n, k, count, time.perf_counter() - t0, "tw-checkpointed")


def _write_checkpoint(path: Path, state: dict) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(state))
    tmp.replace(path)


# --- forests ----------------------------------------------------------------


def is_acyclic(n: int, edges) -> bool:
    """Union-find cycle detection."""
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def _forest_codes(n: int, lo: int, hi: int) -> list[int]:
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    out = []
    for code in range(lo, hi):
        if code.bit_count() < n and is_acyclic(n, (pairs[b] for b in range(len(pairs)) if code >> b & 1)):
            out.append(code)
    return out


def _forest_count(n: int, lo: int, hi: int) -> int:
    return len(_forest_codes(n, lo, hi))


def forest_codes(n: int, workers: int | None = None) -> list[int]:
    if not 1 <= n <= CENSUS_MAX_N:
        raise CapacityError(f"forest census supports n <= {CENSUS_MAX_N}", estimate=2 ** num_pairs(n))
    parts = _map(_forest_codes, [(n, a, b) for a, b in _ranges(1 << num_pairs(n), CHUNK)], workers)
    return [c for p in parts for c in p]


def forest_count(n: int, workers: int | None = None) -> int:
    """Labeled forests on ``n`` vertices, counted by acyclicity alone."""
    if not 1 <= n <= CENSUS_MAX_N:
        raise CapacityError(f"forest census supports n <= {CENSUS_MAX_N}", estimate=2 ** num_pairs(n))
    return sum(_map(_forest_count, [(n, a, b) for a, b in _ranges(1 << num_pairs(n), CHUNK)], workers))


# --- k-trees ----------------------------------------------------------------


def is_ktree_adj(adj: list[int], k: int) -> bool:
    """Peel degree-``k`` vertices with clique neighbourhoods down to ``K_{k+1}``."""
    n = len(adj)
    alive = (1 << n) - 1
    remaining = n
    while remaining > k + 1:
        for v in range(n):
            if not alive >> v & 1:
                continue
            nb = adj[v] & alive
            if nb.bit_count() != k:
                continue
            clique = True
            m = nb
            while m:
                low = m & -m
                u = low.bit_length() - 1
                if (nb & ~low) & ~adj[u]:
                    clique = False
                    break
                m ^= low
            if clique:
                alive &= ~(1 << v)
                remaining -= 1
                break
        else:
            return False
    # what is left must be a clique on k + 1 vertices
    m = alive
    while m:
        low = m & -m
        u = low.bit_length() - 1
        if (alive & ~low) & ~adj[u]:
            return False
        m ^= low
    return remaining == k + 1


def ktree_edge_count(n: int, k: int) -> int:
    return k * n - k * (k + 1) // 2


def _ktrees_in_rank_range(n: int, k: int, lo: int, hi: int) -> int:
    """k-trees among the edge sets of rank ``lo..hi-1`` in the combination order."""
    m = ktree_edge_count(n, k)
    npairs = num_pairs(n)
    pairs = [(i - 1, j - 1) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    found = 0
    for combo in islice(combinations(range(npairs), m), lo, hi):
        adj = [0] * n
        for b in combo:
            i, j = pairs[b]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        if is_ktree_adj(adj, k):
            found += 1
    return found


def census_ktrees(n: int, k: int, workers: int | None = None) -> int:
    """Labeled ``k``-trees on ``n`` vertices, by recognition over every graph
    with exactly ``kn - k(k+1)/2`` edges (the edge count of any k-tree)."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    if n > ENUM_MAX_N:
        raise CapacityError(f"k-tree census supports n <= {ENUM_MAX_N}", estimate=comb(num_pairs(n), ktree_edge_count(n, k)))
    total = comb(num_pairs(n), ktree_edge_count(n, k))
    chunk = max(CHUNK, total // 16 + 1)
    tasks = [(n, k, a, b) for a, b in _ranges(total, chunk)]
    return sum(_map(_ktrees_in_rank_range, tasks, workers))


def ktree_formula(n: int, k: int) -> int:
    """``C(n,k) (kn - k^2 + 1)^(n-k-2)`` for ``n >= k + 2``."""
    if n < k + 2:
        raise ValueError(f"closed form needs n >= k + 2, got n={n}, k={k}")
    return comb(n, k) * (k * n - k * k + 1) ** (n - k - 2)


# --- proper linear k-trees --------------------------------------------------


def _plk_codes_for_order(n: int, k: int, order: tuple[int, ...]) -> set[int]:
    bits = pair_bit(n)

    def edge(a, b):
        return 1 << bits[(a, b) if a < b else (b, a)]

    base = 0
    for a, b in combinations(order[: k + 1], 2):
        base |= edge(a, b)
    out: set[int] = set()

    # prev_clique: the k-clique the previous vertex was attached to
    def grow(i, code, prev_clique):
        if i == n:
            out.add(code)
            return
        v, prev = order[i], order[i - 1]
        for drop in sorted(prev_clique):
            clique = (prev_clique - {drop}) | {prev}
            add = 0
            for u in clique:
                add |= edge(u, v)
            grow(i + 1, code | add, clique)

    grow(k + 1, base, frozenset(order[:k]))
    return out


def _plk_chunk(n: int, k: int, firsts: tuple[int, ...]) -> set[int]:
    out: set[int] = set()
    for first in firsts:
        rest = [v for v in range(1, n + 1) if v != first]
        for tail in permutations(rest):
            out |= _plk_codes_for_order(n, k, (first,) + tail)
    return out


def proper_linear_ktrees(n: int, k: int, workers: int | None = None) -> set[LabeledGraph]:
    """All labeled proper linear k-trees, built from every introduction order.

    Start from a clique on the first ``k+1`` vertices; vertex ``v_i`` joins a
    ``k``-clique containing ``v_{i-1}`` plus ``k-1`` members of the clique
    ``v_{i-1}`` joined.  ``v_{k+1}`` counts as having joined ``{v_1..v_k}``.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    if n > ENUM_MAX_N:
        raise CapacityError(f"proper linear k-tree census supports n <= {ENUM_MAX_N}")
    tasks = [(n, k, (v,)) for v in range(1, n + 1)]
    codes: set[int] = set()
    for part in _map(_plk_chunk, tasks, workers):
        codes |= part
    return {LabeledGraph(n, c) for c in codes}


def census_proper_linear_ktrees(n: int, k: int, workers: int | None = None) -> int:
    return len(proper_linear_ktrees(n, k, workers))


# --- apex over forest -------------------------------------------------------


@dataclass(frozen=True)
class ApexForestResult:
    n: int
    k: int
    exact: int
    lower_bound: int
    max_treewidth: int | None

    @property
    def ok(self) -> bool:
        tw_ok = self.max_treewidth is None or self.max_treewidth <= self.k
        return self.exact >= self.lower_bound and tw_ok


def apex_graphs(n: int, k: int) -> set[int]:
    """Edge codes of forest-on-``1..n-k+1`` plus ``k-1`` apices on the top labels.

    Each apex has an arbitrary neighbourhood in the forest part; apices are
    pairwise non-adjacent.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if n > ENUM_MAX_N:
        raise CapacityError(f"apex construction supports n <= {ENUM_MAX_N}")
    m = n - k + 1
    bits = pair_bit(n)
    small_pairs = [(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)]
    forests = []
    for fc in _forest_codes(m, 0, 1 << len(small_pairs)) if m > 1 else [0]:
        code = 0
        for b, (i, j) in enumerate(small_pairs):
            if fc >> b & 1:
                code |= 1 << bits[(i, j)]
        forests.append(code)
    apex_options = []
    for a in range(m + 1, n + 1):
        opts = []
        for mask in range(1 << m):
            code = 0
            for u in range(m):
                if mask >> u & 1:
                    code |= 1 << bits[(u + 1, a)]
            opts.append(code)
        apex_options.append(opts)
    codes = set(forests)
    for opts in apex_options:
        codes = {c | o for c in codes for o in opts}
    return codes


def apex_forest_count(n: int, k: int, check_treewidth: bool = True) -> ApexForestResult:
    from .bounds import lb_eq3

    codes = apex_graphs(n, k)
    max_tw = None
    if check_treewidth:
        max_tw = max(treewidth_adj(adjacency_from_code(n, c)) for c in codes)
    return ApexForestResult(n, k, len(codes), lb_eq3(n, k), max_tw)
