"""Exact treewidth, pathwidth and proper-pathwidth for small graphs.

All solvers work on 0-based adjacency bitmasks internally and iterate vertices
in increasing label order, so certificates are reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import CapacityError
from .graph import LabeledGraph

TREEWIDTH_MAX_N = 13
PATHWIDTH_MAX_N = 13
PROPER_PATHWIDTH_MAX_N = 8


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _cap(g: LabeledGraph, cap: int, what: str) -> None:
    if g.n > cap:
        raise CapacityError(f"{what} supports n <= {cap}, got n={g.n}", estimate=2 ** g.n)


@dataclass(frozen=True)
class ProperPathDecomposition:
    bags: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, bags) -> "ProperPathDecomposition":
        return cls(tuple(frozenset(b) for b in bags))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def to_json(self) -> str:
        return json.dumps([sorted(b) for b in self.bags])

    @classmethod
    def from_json(cls, text: str) -> "ProperPathDecomposition":
        return cls.of(json.loads(text))


@dataclass(frozen=True)
class PPDCheck:
    """Outcome of :func:`check_ppd`; truthy iff all five conditions hold."""

    ok: bool
    condition: str | None = None
    witness: tuple = ()

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class WidthReport:
    tw: int
    pw: int
    ppw: int


def check_ppd(g: LabeledGraph, d: ProperPathDecomposition) -> PPDCheck:
    """Check conditions C1..C5 in order and report the first failure.

    Witnesses are 0-based bag indices (plus the offending vertex or edge for
    C2 and C3).
    """
    bags = d.bags
    r = len(bags)
    for i in range(r):
        for j in range(r):
            if i != j and bags[i] <= bags[j]:
                return PPDCheck(False, "C1", (i, j))
    union = frozenset().union(*bags) if bags else frozenset()
    for v in g.vertices():
        if v not in union:
            return PPDCheck(False, "C2", (v,))
    for u, v in g.edges:
        if not any(u in b and v in b for b in bags):
            return PPDCheck(False, "C3", (u, v))
    for a in range(r):
        for c in range(a + 2, r):
            common = bags[a] & bags[c]
            for b in range(a + 1, c):
                if not common <= bags[b]:
                    return PPDCheck(False, "C4", (a, b, c))
    for a in range(r):
        for c in range(a + 2, r):
            common = len(bags[a] & bags[c])
            for b in range(a + 1, c):
                if common > len(bags[b]) - 2:
                    return PPDCheck(False, "C5", (a, b, c))
    return PPDCheck(True)


# treewidth ------------------------------------------------------------------


def _reach_outside(adj: list[int], inside: int, v: int) -> int:
    """Vertices outside ``inside | {v}`` reachable from ``v`` through ``inside``."""
    comp = 1 << v
    frontier = comp
    while frontier:
        nb = 0
        for u in _bits(frontier):
            nb |= adj[u]
        frontier = nb & inside & ~comp
        comp |= frontier
    out = 0
    for u in _bits(comp):
        out |= adj[u]
    return out & ~inside & ~(1 << v)


def _tw_dp(adj: list[int], vertices: int, upper: int) -> int:
    """Subset DP over elimination prefixes, restricted to ``vertices``.

    ``TW(S) = min_v max(TW(S - v), |Q(S - v, v)|)``; states whose value already
    reaches ``upper`` are dropped, so the result is ``min(tw, upper)``.
    """
    layer = {0: -1}
    for _ in range(vertices.bit_count()):
        nxt: dict[int, int] = {}
        for s, val in layer.items():
            for v in _bits(vertices & ~s):
                q = (_reach_outside(adj, s, v) & vertices).bit_count()
                w = val if val > q else q
                if w >= upper:
                    continue
                t = s | 1 << v
                old = nxt.get(t)
                if old is None or w < old:
                    nxt[t] = w
        if not nxt:
            return upper
        layer = nxt
    return max(layer[vertices], 0)


def _simplicial_reduce(adj: list[int], vertices: int) -> tuple[int, int]:
    """Strip simplicial vertices; ``tw(G) = max(deg v, tw(G - v))`` for each one."""
    low = 0
    changed = True
    while changed:
        changed = False
        for v in _bits(vertices):
            nb = adj[v] & vertices
            if all(nb & ~adj[u] & ~(1 << u) == 0 for u in _bits(nb)):
                d = nb.bit_count()
                if d > low:
                    low = d
                vertices &= ~(1 << v)
                changed = True
    return low, vertices


def treewidth_adj(adj: list[int], upper: int | None = None) -> int:
    n = len(adj)
    full = (1 << n) - 1
    low, rest = _simplicial_reduce(adj, full)
    if rest == 0:
        return low
    bound = n if upper is None else upper + 1
    return max(low, _tw_dp(adj, rest, bound))


def treewidth_exact(g: LabeledGraph) -> int:
    _cap(g, TREEWIDTH_MAX_N, "treewidth_exact")
    return treewidth_adj(g.adjacency)


def is_partial_ktree(g: LabeledGraph, k: int) -> bool:
    """Treewidth at most ``k``, decided by a width-capped subset DP."""
    _cap(g, TREEWIDTH_MAX_N, "is_partial_ktree")
    if k < 0:
        return False
    if k >= g.n - 1:
        return True
    if g.num_edges > k * g.n - k * (k + 1) // 2:
        return False
    return treewidth_adj(g.adjacency, upper=k) <= k


def is_partial_ktree_by_completion(g: LabeledGraph, k: int) -> bool:
    """Independent recognizer: search for a k-tree containing ``g``.

    Repeatedly pick a vertex ``v`` of degree at most ``k``, extend its
    neighbourhood to some ``k``-set ``S``, turn ``S`` into a clique and delete
    ``v``; succeed once at most ``k + 1`` vertices remain.  Every k-tree with
    more than ``k + 1`` vertices has a vertex attached to a ``k``-clique, so
    this explores exactly the k-tree supergraphs of ``g``.
    """
    if k >= g.n - 1:
        return True
    if k < 1:
        return g.num_edges == 0
    adj = g.adjacency
    seen: set[tuple[int, ...]] = set()

    def search(adj, alive):
        if alive.bit_count() <= k + 1:
            return True
        key = (alive,) + tuple(adj[v] & alive for v in _bits(alive))
        if key in seen:
            return False
        seen.add(key)
        for v in _bits(alive):
            nb = adj[v] & alive
            if nb.bit_count() > k:
                continue
            pool = [u for u in _bits(alive & ~nb & ~(1 << v))]
            for extra in combinations(pool, k - nb.bit_count()):
                clique = nb
                for u in extra:
                    clique |= 1 << u
                new = list(adj)
                for u in _bits(clique):
                    new[u] |= clique & ~(1 << u)
                if search(new, alive & ~(1 << v)):
                    return True
        return False

    return search(adj, (1 << g.n) - 1)


# pathwidth ------------------------------------------------------------------


def pathwidth_adj(adj: list[int]) -> int:
    """Vertex separation number by DP over placed prefixes ``S``.

    ``VS(S) = max(|boundary(S)|, min_v VS(S - v))`` where ``boundary(S)`` holds
    the vertices of ``S`` that still have a neighbour outside ``S``.
    """
    n = len(adj)
    if n <= 1:
        return 0
    full = (1 << n) - 1
    best = {0: 0}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for s, val in best.items():
            for v in _bits(full & ~s):
                t = s | 1 << v
                if t in nxt and nxt[t] <= val:
                    continue
                bd = 0
                for u in _bits(t):
                    if adj[u] & ~t:
                        bd += 1
                w = val if val > bd else bd
                old = nxt.get(t)
                if old is None or w < old:
                    nxt[t] = w
        best = nxt
    return best[full]


def pathwidth_exact(g: LabeledGraph) -> int:
    _cap(g, PATHWIDTH_MAX_N, "pathwidth_exact")
    return pathwidth_adj(g.adjacency)


# proper-pathwidth -----------------------------------------------------------


def _ppd_search(adj: list[int], n: int, w: int) -> list[int] | None:
    """Swap-normal proper-path decomposition of width ``w``, as bag bitmasks.

    Every bag has ``w + 1`` vertices and each step drops one vertex and adds
    one new vertex.  A vertex may only be dropped once all its neighbours have
    appeared, and never right after it was added (that would put two bags at
    distance two with ``w`` common vertices).
    """
    full = (1 << n) - 1
    failed: set[tuple[int, int, int]] = set()

    def extend(bag, forgotten, last):
        seen = bag | forgotten
        if seen == full:
            return [bag]
        key = (bag, forgotten, last)
        if key in failed:
            return None
        for v in _bits(bag):
            if v == last or adj[v] & ~seen:
                continue
            for p in _bits(full & ~seen):
                rest = extend((bag & ~(1 << v)) | 1 << p, forgotten | 1 << v, p)
                if rest is not None:
                    return [bag] + rest
        failed.add(key)
        return None

    for first in combinations(range(n), w + 1):
        bag = 0
        for v in first:
            bag |= 1 << v
        found = extend(bag, 0, -1)
        if found is not None:
            return found
    return None


def proper_path_decomposition(g: LabeledGraph) -> ProperPathDecomposition:
    """A minimum-width swap-normal proper-path decomposition."""
    _cap(g, PROPER_PATHWIDTH_MAX_N, "proper_pathwidth_exact")
    adj = g.adjacency
    n = g.n
    for w in range(pathwidth_adj(adj), n):
        bags = _ppd_search(adj, n, w)
        if bags is not None:
            return ProperPathDecomposition(
                tuple(frozenset(v + 1 for v in _bits(b)) for b in bags)
            )
    raise AssertionError("a single bag holding every vertex is always proper")


def proper_pathwidth_exact(g: LabeledGraph) -> int:
    return proper_path_decomposition(g).width


def width_report(g: LabeledGraph) -> WidthReport:
    return WidthReport(treewidth_exact(g), pathwidth_exact(g), proper_pathwidth_exact(g))
