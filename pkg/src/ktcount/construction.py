"""Constructible triples ``(sigma, f, N)`` and the graphs they generate.

Vertices are introduced one at a time; step ``i`` introduces the vertex
labelled ``sigma(i)``.  All construction state (active sets, anchors, frozen
vertices, left neighbourhoods) lives in *index* space ``1..n``; ``sigma`` only
maps indices to labels when a graph or bag is produced.  Consequently the
``(f, N)`` part of a triple, called its *skeleton* here, does not depend on
``sigma`` at all and is enumerated once per ``(n, k, s)``.

Steps ``i >= k + 2`` are grouped in blocks of ``s`` consecutive indices.  A
block starts when ``i = k + 2 (mod s)``; there the previous anchor is frozen
and the new anchor is the smallest active index.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator

import numpy as np

from .bounds import eq8_numerator, preimage_bound
from .errors import CapacityError, ConsistencyError, ReconstructionError, TripleValidationError
from .graph import LabeledGraph, pair_bit
from .parallel import pmap
from .widths import ProperPathDecomposition

ENUMERATION_CAP = 10**8


def min_neighbourhood(k: int, strict: bool = False) -> int:
    """Least allowed ``|N(i)|`` for ``i >= k + 2``.

    The default is ``ceil((k + 1) / 2)``, the size used when counting the
    choices for ``N(i)``.  ``strict=True`` gives ``floor((k + 1) / 2) + 1``, the
    literal strict inequality; the two differ only for odd ``k``.
    """
    if strict:
        return (k + 1) // 2 + 1
    return (k + 2) // 2


def is_block_start(i: int, k: int, s: int) -> bool:
    return (i - (k + 2)) % s == 0


def block_id(i: int, k: int, s: int) -> int | None:
    """Block number of step ``i``; ``None`` for the initial steps ``i <= k+1``."""
    if i < k + 2:
        return None
    return (i - (k + 2)) // s


@dataclass(frozen=True)
class ConstructibleTriple:
    """``sigma[i-1] = sigma(i)``, ``f[i-k-2] = f(i)``, ``N[i-2] = N(i)``.

    ``strict`` selects the neighbourhood-size rule of :func:`min_neighbourhood`.
    """

    n: int
    k: int
    s: int
    sigma: tuple[int, ...]
    f: tuple[int, ...]
    N: tuple[frozenset[int], ...]
    strict: bool = False

    def frozen(self, i: int) -> int:
        return self.f[i - self.k - 2]

    def left(self, i: int) -> frozenset[int]:
        return self.N[i - 2]

    def label(self, i: int) -> int:
        return self.sigma[i - 1]

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "sigma": list(self.sigma),
            "f": {str(i): self.frozen(i) for i in range(self.k + 2, self.n + 1)},
            "N": {str(i): sorted(self.left(i)) for i in range(2, self.n + 1)},
        }
        if self.strict:
            d["strict"] = True
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ConstructibleTriple":
        n, k = int(d["n"]), int(d["k"])
        f = tuple(int(d["f"][str(i)]) for i in range(k + 2, n + 1))
        N = tuple(frozenset(int(x) for x in d["N"][str(i)]) for i in range(2, n + 1))
        sigma = tuple(int(x) for x in d["sigma"])
        return cls(n, k, int(d["s"]), sigma, f, N, bool(d.get("strict", False)))

    @classmethod
    def from_json(cls, text: str) -> "ConstructibleTriple":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class TraceStep:
    i: int
    active: frozenset[int] | None
    anchor: int | None
    frozen: int | None
    block: int | None


@dataclass(frozen=True)
class ConstructionTrace:
    triple: ConstructibleTriple
    steps: tuple[TraceStep, ...]

    def step(self, i: int) -> TraceStep:
        return self.steps[i - 2]

    def active(self, i: int) -> frozenset[int]:
        a = self.step(i).active
        if a is None:
            raise KeyError(f"no active set at step {i}")
        return a

    def anchor(self, i: int) -> int:
        a = self.step(i).anchor
        if a is None:
            raise KeyError(f"no anchor at step {i}")
        return a

    def blocks(self) -> list[tuple[int, ...]]:
        """Index blocks: the initial ``2..k+1`` followed by each ``s``-block."""
        t = self.triple
        out = [tuple(range(2, min(t.k + 1, t.n) + 1))]
        for i in range(t.k + 2, t.n + 1):
            if is_block_start(i, t.k, t.s):
                out.append((i,))
            else:
                out[-1] = out[-1] + (i,)
        return out


# --- validation -------------------------------------------------------------


def validate_triple(t: ConstructibleTriple) -> ConstructionTrace:
    """Replay the construction and confirm every rule, returning the trace.

    Raises :class:`TripleValidationError` naming the first broken rule.
    """
    n, k, s = t.n, t.k, t.s
    if not 1 < k <= n:
        raise TripleValidationError("1 < k <= n", 0, f"n={n}, k={k}")
    if s < 1:
        raise TripleValidationError("s >= 1", 0, f"s={s}")
    if sorted(t.sigma) != list(range(1, n + 1)):
        raise TripleValidationError("sigma is a permutation", 1)
    if t.sigma[0] != 1:
        raise TripleValidationError("sigma(1) = 1", 1)
    if len(t.N) != n - 1:
        raise TripleValidationError("N defined on 2..n", 2)
    if len(t.f) != max(n - k - 1, 0):
        raise TripleValidationError("f defined on k+2..n", k + 2)

    steps = []
    for i in range(2, min(k + 1, n) + 1):
        Ni = t.left(i)
        if not Ni <= set(range(1, i)):
            raise TripleValidationError("N(i) subset of {j < i}", i)
        if 1 not in Ni:
            raise TripleValidationError("1 in N(i)", i)
        if i == k + 1:
            steps.append(TraceStep(i, frozenset(range(1, k + 1)), 1, None, None))
        else:
            steps.append(TraceStep(i, None, None, None, None))

    if n >= k + 2:
        need = min_neighbourhood(k, t.strict)
        active = frozenset(range(1, k + 1))
        anchor = 1
        prev_N = t.left(k + 1)
        for i in range(k + 2, n + 1):
            fi = t.frozen(i)
            if is_block_start(i, k, s):
                if fi != anchor:
                    raise TripleValidationError("f(i) = a_(i-1) at block start", i, f"f={fi}, a={anchor}")
                active = (active - {fi}) | {i - 1}
                anchor = min(active)
            else:
                if fi not in (active - {anchor}) & prev_N:
                    raise TripleValidationError("f(i) in (A_(i-1) - a_(i-1)) & N(i-1)", i, f"f={fi}")
                active = (active - {fi}) | {i - 1}
            Ni = t.left(i)
            if not Ni <= active:
                raise TripleValidationError("N(i) subset of A_i", i)
            if anchor not in Ni:
                raise TripleValidationError("a_i in N(i)", i)
            if len(Ni) < need:
                raise TripleValidationError("|N(i)| > (k+1)/2", i, f"|N(i)|={len(Ni)} < {need}")
            steps.append(TraceStep(i, active, anchor, fi, block_id(i, k, s)))
            prev_N = Ni
    return ConstructionTrace(t, tuple(steps))


# --- graphs and decompositions ----------------------------------------------


def _skeleton_code(n: int, N: tuple[frozenset[int], ...], sigma: tuple[int, ...]) -> int:
    bits = pair_bit(n)
    code = 0
    for i in range(2, n + 1):
        a = sigma[i - 1]
        for j in N[i - 2]:
            b = sigma[j - 1]
            code |= 1 << bits[(a, b) if a < b else (b, a)]
    return code


def build_graph(t: ConstructibleTriple) -> LabeledGraph:
    """Edges ``{sigma(i), sigma(j)}`` for every ``j in N(i)``."""
    validate_triple(t)
    return LabeledGraph(t.n, _skeleton_code(t.n, t.N, t.sigma))


def ppd_witness(t: ConstructibleTriple) -> ProperPathDecomposition:
    """Bags ``sigma(A_i + {i})`` for ``i = k+1..n``; each has ``k+1`` vertices."""
    trace = validate_triple(t)
    if t.n < t.k + 1:
        raise ValueError(f"witness needs n >= k+1, got n={t.n}, k={t.k}")
    bags = []
    for i in range(t.k + 1, t.n + 1):
        bags.append(frozenset(t.label(j) for j in trace.active(i) | {i}))
    return ProperPathDecomposition(tuple(bags))


# --- enumeration ------------------------------------------------------------


def _n_choices(k: int, active: frozenset[int], anchor: int, strict: bool) -> list[frozenset[int]]:
    rest = sorted(active - {anchor})
    need = min_neighbourhood(k, strict)
    out = []
    for r in range(need - 1, len(rest) + 1):
        for extra in combinations(rest, r):
            out.append(frozenset((anchor,) + extra))
    return out


def _initial_choices(i: int) -> list[frozenset[int]]:
    others = range(2, i)
    return [frozenset((1,) + c) for r in range(i - 1) for c in combinations(others, r)]


def _mask(xs: frozenset[int]) -> int:
    return sum(1 << (x - 1) for x in xs)


def estimate_triples(n: int, k: int, s: int, strict: bool = False) -> int:
    """Upper bound on the number of triples: product of per-step option counts."""
    est = math.factorial(n - 1)
    for i in range(2, min(k + 1, n) + 1):
        est *= 2 ** (i - 2)
    need = min_neighbourhood(k, strict)
    per_N = sum(math.comb(k - 1, r - 1) for r in range(need, k + 1))
    for i in range(k + 2, n + 1):
        est *= per_N * (1 if is_block_start(i, k, s) else k - 1)
    return est


def _check_budget(n: int, k: int, s: int, cap: int | None, strict: bool = False) -> None:
    if not 1 < k <= n:
        raise ValueError(f"need 1 < k <= n, got n={n}, k={k}")
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    est = estimate_triples(n, k, s, strict)
    limit = ENUMERATION_CAP if cap is None else cap
    if est > limit:
        raise CapacityError(
            f"(n={n}, k={k}, s={s}) may produce up to {est} triples, above the cap {limit}",
            estimate=est,
        )


@lru_cache(maxsize=64)
def skeletons(n: int, k: int, s: int, strict: bool = False) -> tuple[tuple[tuple[int, ...], tuple[frozenset[int], ...]], ...]:
    """Every legal ``(f, N)`` pair, sorted by ``f`` then by ``N`` as bitmasks."""
    found = []

    def walk(i, f, N, active, anchor):
        if i > n:
            found.append((tuple(f), tuple(N)))
            return
        if i <= k + 1:
            for Ni in _initial_choices(i):
                N.append(Ni)
                walk(i + 1, f, N, active, anchor)
                N.pop()
            return
        if is_block_start(i, k, s):
            options = [anchor]
        else:
            options = sorted((active - {anchor}) & N[-1])
        for fi in options:
            new_active = (active - {fi}) | {i - 1}
            new_anchor = min(new_active) if is_block_start(i, k, s) else anchor
            f.append(fi)
            for Ni in _n_choices(k, new_active, new_anchor, strict):
                N.append(Ni)
                walk(i + 1, f, N, new_active, new_anchor)
                N.pop()
            f.pop()

    walk(2, [], [], frozenset(range(1, k + 1)), 1)
    found.sort(key=lambda fn: (fn[0], tuple(_mask(x) for x in fn[1])))
    return tuple(found)


def sigmas(n: int) -> Iterator[tuple[int, ...]]:
    """Permutations fixing 1, in lexicographic order."""
    for rest in permutations(range(2, n + 1)):
        yield (1,) + rest


def enumerate_triples(
    n: int, k: int, s: int, cap: int | None = None, strict: bool = False
) -> Iterator[ConstructibleTriple]:
    """Every constructible triple once: ``sigma`` lexicographic, then ``f``, then ``N``."""
    _check_budget(n, k, s, cap, strict)
    skel = skeletons(n, k, s, strict)
    for sigma in sigmas(n):
        for f, N in skel:
            yield ConstructibleTriple(n, k, s, sigma, f, N, strict)


def count_triples(n: int, k: int, s: int, cap: int | None = None, strict: bool = False) -> int:
    _check_budget(n, k, s, cap, strict)
    return math.factorial(n - 1) * len(skeletons(n, k, s, strict))


def triple_count_lower_bound(n: int, k: int, s: int) -> int:
    """Floor of the closed-form lower bound on the number of triples."""
    return math.floor(eq8_numerator(n, k, s))


# --- distinct graphs and duplicates -----------------------------------------


def _preimage_unit(n: int, k: int, s: int, strict: bool, second: int | None) -> Counter:
    counts: Counter = Counter()
    skel = skeletons(n, k, s, strict)
    for sigma in sigmas(n):
        if second is not None and sigma[1] != second:
            continue
        for _, N in skel:
            counts[_skeleton_code(n, N, sigma)] += 1
    return counts


def preimage_counts(
    n: int, k: int, s: int, cap: int | None = None, strict: bool = False, workers: int | None = 1
) -> Counter:
    """Map each generated graph's edge code to the number of triples yielding it.

    The ``sigma`` space is split by ``sigma(2)`` into independent work units.
    """
    _check_budget(n, k, s, cap, strict)
    units = [(n, k, s, strict, v) for v in range(2, n + 1)] or [(n, k, s, strict, None)]
    counts: Counter = Counter()
    for part in pmap(_preimage_unit, units, workers):
        counts.update(part)
    return counts


def distinct_graphs(
    n: int, k: int, s: int, cap: int | None = None, strict: bool = False, workers: int | None = 1
) -> tuple[set[LabeledGraph], int]:
    codes = preimage_counts(n, k, s, cap, strict, workers)
    graphs = {LabeledGraph(n, c) for c in codes}
    return graphs, len(graphs)


def count_preimages(
    H: LabeledGraph, n: int, k: int, s: int, cap: int | None = None, strict: bool = False
) -> int:
    """Number of constructible triples ``t`` with ``build_graph(t) == H``."""
    if H.n != n:
        return 0
    _check_budget(n, k, s, cap, strict)
    skel = skeletons(n, k, s, strict)
    total = 0
    for sigma in sigmas(n):
        for _, N in skel:
            if _skeleton_code(n, N, sigma) == H.code:
                total += 1
    return total


@dataclass(frozen=True)
class DSets:
    k: int
    sets: dict[int, frozenset[int]]

    def late(self) -> dict[int, frozenset[int]]:
        """The sets ``D_i`` with ``i > k + 1``."""
        return {i: d for i, d in self.sets.items() if i > self.k + 1}

    def is_disjoint(self) -> bool:
        seen: set[int] = set()
        for d in self.late().values():
            if seen & d:
                return False
            seen |= d
        return True

    def total_from(self, start: int) -> int:
        return sum(len(d) for i, d in self.sets.items() if i >= start)

    def large_product(self) -> int:
        """Product of ``|D_i|`` over ``i > k + 1`` with ``|D_i| >= 2``."""
        return math.prod(len(d) for d in self.late().values() if len(d) >= 2)


def compute_D_sets(t: ConstructibleTriple, H: LabeledGraph) -> DSets:
    """``D_i``: the indices in ``N(i)`` with no neighbour among later indices."""
    if build_graph(t) != H:
        raise ConsistencyError("H is not the graph generated by the triple")
    label = t.label
    sets = {}
    for i in range(2, t.n + 1):
        sets[i] = frozenset(
            j for j in t.left(i)
            if not any(H.has_edge(label(j), label(jj)) for jj in range(i + 1, t.n + 1))
        )
    return DSets(t.k, sets)


def reconstruct_blocks(H: LabeledGraph, k: int, s: int, prefix) -> tuple[frozenset[int], int]:
    """Vertex labels of the next block after ``prefix`` and the anchor label.

    ``prefix`` lists ``sigma(1), sigma(2), ...``.  With only ``sigma(1)`` known
    the next block is the neighbourhood of vertex 1.  Otherwise the anchor is
    the earliest introduced vertex that still has an unintroduced neighbour,
    and the block is that neighbourhood.
    """
    prefix = tuple(prefix)
    n = H.n
    if not prefix or prefix[0] != 1:
        raise ReconstructionError("prefix must start with vertex 1")
    m = len(prefix)
    if m == n:
        raise ReconstructionError("prefix already covers every vertex")
    placed = set(prefix)
    adj = H.adjacency
    if m == 1:
        block = frozenset(u + 1 for u in range(n) if adj[0] >> u & 1)
        if len(block) != min(k, n - 1):
            raise ReconstructionError(f"vertex 1 has {len(block)} neighbours, expected {min(k, n - 1)}")
        return block, 1
    if m < k + 1 or (m - (k + 1)) % s:
        raise ReconstructionError(f"prefix length {m} does not end a block")
    for v in prefix:
        later = frozenset(u + 1 for u in range(n) if adj[v - 1] >> u & 1 and u + 1 not in placed)
        if later:
            expected = min(s, n - m)
            if len(later) != expected:
                raise ReconstructionError(
                    f"anchor {v} has {len(later)} unintroduced neighbours, expected {expected}"
                )
            return later, v
    raise ReconstructionError("no introduced vertex is adjacent to the remaining vertices")


# --- sampling ---------------------------------------------------------------


def sample_triple(n: int, k: int, s: int, seed, strict: bool = False) -> ConstructibleTriple:
    """Random triple making each choice uniformly among its legal options.

    ``seed`` may be an int, a :class:`numpy.random.SeedSequence` or a
    :class:`numpy.random.Generator`.
    """
    if not 1 < k <= n or s < 1:
        raise ValueError(f"need 1 < k <= n and s >= 1, got n={n}, k={k}, s={s}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    rest = [int(x) for x in rng.permutation(np.arange(2, n + 1))]
    sigma = (1,) + tuple(rest)
    N: list[frozenset[int]] = []
    f: list[int] = []

    def pick(options):
        return options[int(rng.integers(len(options)))]

    for i in range(2, min(k + 1, n) + 1):
        N.append(pick(_initial_choices(i)))
    active = frozenset(range(1, k + 1))
    anchor = 1
    for i in range(k + 2, n + 1):
        if is_block_start(i, k, s):
            fi = anchor
        else:
            fi = pick(sorted((active - {anchor}) & N[-1]))
        active = (active - {fi}) | {i - 1}
        if is_block_start(i, k, s):
            anchor = min(active)
        f.append(fi)
        N.append(pick(_n_choices(k, active, anchor, strict)))
    return ConstructibleTriple(n, k, s, sigma, tuple(f), tuple(N), strict)


@dataclass(frozen=True)
class GridRow:
    """One line of the triple/preimage table."""

    n: int
    k: int
    s: int
    triple_count: int
    triple_lower_bound: int
    R: int
    max_preimages: int
    preimage_bound: int
    single_partial_block: bool


def grid_row(
    n: int, k: int, s: int, cap: int | None = None, strict: bool = False, workers: int | None = 1
) -> GridRow:
    counts = preimage_counts(n, k, s, cap, strict, workers)
    return GridRow(
        n, k, s,
        triple_count=sum(counts.values()),
        triple_lower_bound=triple_count_lower_bound(n, k, s),
        R=len(counts),
        max_preimages=max(counts.values()),
        preimage_bound=preimage_bound(n, k, s),
        single_partial_block=s > n - (k + 1),
    )


# --- full audit of a grid cell ----------------------------------------------


def _index_bags(n: int, k: int, s: int, f, N, strict: bool) -> tuple[frozenset[int], ...]:
    t = ConstructibleTriple(n, k, s, tuple(range(1, n + 1)), f, N, strict)
    return ppd_witness(t).bags


def _audit_unit(n: int, k: int, s: int, strict: bool, second: int | None) -> tuple[Counter, int, int]:
    """Preimage counts plus the number of triples whose witness fails ``check_ppd``
    or has width other than ``k``, for the triples with ``sigma(2) = second``."""
    from .widths import check_ppd

    skel = skeletons(n, k, s, strict)
    bags = [_index_bags(n, k, s, f, N, strict) for f, N in skel]
    counts: Counter = Counter()
    bad_ppd = bad_width = 0
    for sigma in sigmas(n):
        if second is not None and sigma[1] != second:
            continue
        for (_, N), ib in zip(skel, bags):
            code = _skeleton_code(n, N, sigma)
            counts[code] += 1
            d = ProperPathDecomposition(tuple(frozenset(sigma[j - 1] for j in b) for b in ib))
            if not check_ppd(LabeledGraph(n, code), d):
                bad_ppd += 1
            if d.width != k:
                bad_width += 1
    return counts, bad_ppd, bad_width


@dataclass(frozen=True)
class AuditRow:
    """Every per-triple and per-graph check for one ``(n, k, s)`` cell.

    ``dset_*`` and ``width_*`` are evaluated once per skeleton (``sigma`` the
    identity); both are invariant under relabeling, so this covers every
    triple.  ``graphs_width_checked`` counts distinct graphs whose widths were
    also certified directly (all of them when ``n <= direct_width_max_n``).
    """

    n: int
    k: int
    s: int
    triple_count: int
    triple_lower_bound: int
    R: int
    lb_eq8: object
    max_preimages: int
    preimage_bound: int
    ppd_failures: int
    ppd_width_failures: int
    dset_overlaps: int
    dset_max_product: int
    width_failures: int
    graphs_width_checked: int

    @property
    def ok(self) -> bool:
        from fractions import Fraction

        lb8 = Fraction(self.lb_eq8)
        return (
            self.triple_count >= self.triple_lower_bound
            and self.max_preimages <= self.preimage_bound
            and (lb8 < 1 or self.R >= lb8)
            and self.ppd_failures == 0
            and self.ppd_width_failures == 0
            and self.dset_overlaps == 0
            and self.dset_max_product <= 2**self.k
            and self.width_failures == 0
        )


def audit_cell(
    n: int,
    k: int,
    s: int,
    cap: int | None = None,
    strict: bool = False,
    workers: int | None = 1,
    direct_width_max_n: int = 6,
) -> AuditRow:
    from .bounds import lb_eq8
    from .widths import proper_pathwidth_exact, treewidth_exact

    if n < k + 1:
        raise ValueError(f"audit needs n >= k+1, got n={n}, k={k}")
    _check_budget(n, k, s, cap, strict)
    units = [(n, k, s, strict, v) for v in range(2, n + 1)] or [(n, k, s, strict, None)]
    counts: Counter = Counter()
    bad_ppd = bad_width = 0
    for part, bp, bw in pmap(_audit_unit, units, workers):
        counts.update(part)
        bad_ppd += bp
        bad_width += bw

    identity = tuple(range(1, n + 1))
    overlaps = 0
    dmax = 1
    width_fail = 0
    for f, N in skeletons(n, k, s, strict):
        t = ConstructibleTriple(n, k, s, identity, f, N, strict)
        H = build_graph(t)
        D = compute_D_sets(t, H)
        overlaps += not D.is_disjoint()
        dmax = max(dmax, D.large_product())
        if treewidth_exact(H) > k or proper_pathwidth_exact(H) > k:
            width_fail += 1
    checked = 0
    if n <= direct_width_max_n:
        for code in sorted(counts):
            H = LabeledGraph(n, code)
            if treewidth_exact(H) > k or proper_pathwidth_exact(H) > k:
                width_fail += 1
            checked += 1
    return AuditRow(
        n, k, s,
        triple_count=sum(counts.values()),
        triple_lower_bound=triple_count_lower_bound(n, k, s),
        R=len(counts),
        lb_eq8=lb_eq8(n, k, s),
        max_preimages=max(counts.values()),
        preimage_bound=preimage_bound(n, k, s),
        ppd_failures=bad_ppd,
        ppd_width_failures=bad_width,
        dset_overlaps=overlaps,
        dset_max_product=dmax,
        width_failures=width_fail,
        graphs_width_checked=checked,
    )
