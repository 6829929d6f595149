"""Labeled simple graphs on vertices ``1..n`` stored as an edge bitset.

Bit ``b`` of :attr:`LabeledGraph.code` is the ``b``-th unordered pair in
lexicographic order ``(1,2), (1,3), ..., (1,n), (2,3), ...``.  graph6 uses a
different (column-major) bit order; :func:`to_graph6` and :func:`from_graph6`
convert explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import IO, Iterable, Iterator

from .errors import Graph6Error

MAX_N = 16


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[tuple[int, int], ...]:
    """All pairs ``(i, j)`` with ``1 <= i < j <= n`` in lexicographic order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def pair_bit(n: int) -> dict[tuple[int, int], int]:
    return {p: b for b, p in enumerate(pair_list(n))}


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"vertex count must be in 1..{MAX_N}, got {n}")


@dataclass(frozen=True)
class LabeledGraph:
    """Simple undirected graph on ``1..n``; equality is labeled equality."""

    n: int
    code: int = 0

    def __post_init__(self):
        _check_n(self.n)
        if not 0 <= self.code < (1 << num_pairs(self.n)):
            raise ValueError(f"edge code {self.code} out of range for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "LabeledGraph":
        _check_n(n)
        bits = pair_bit(n)
        code = 0
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge {(u, v)} outside 1..{n}")
            code |= 1 << bits[(min(u, v), max(u, v))]
        return cls(n, code)

    @classmethod
    def from_adjacency(cls, adj: list[int]) -> "LabeledGraph":
        """Inverse of :attr:`adjacency` (0-based bitmask rows)."""
        n = len(adj)
        code = 0
        for b, (i, j) in enumerate(pair_list(n)):
            if adj[i - 1] >> (j - 1) & 1:
                code |= 1 << b
        return cls(n, code)

    @property
    def edges(self) -> list[tuple[int, int]]:
        pairs = pair_list(self.n)
        c = self.code
        return [pairs[b] for b in range(len(pairs)) if c >> b & 1]

    @property
    def num_edges(self) -> int:
        return self.code.bit_count()

    @property
    def adjacency(self) -> list[int]:
        """Row ``v-1`` is a bitmask whose bit ``u-1`` marks the edge ``{u, v}``."""
        return adjacency_from_code(self.n, self.code)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return bool(self.code >> pair_bit(self.n)[(min(u, v), max(u, v))] & 1)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def relabel(self, mapping) -> "LabeledGraph":
        """Image under ``v -> mapping[v]``; ``mapping`` must be a bijection of ``1..n``."""
        return LabeledGraph.from_edges(self.n, ((mapping[u], mapping[v]) for u, v in self.edges))

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, edges={self.edges})"


@lru_cache(maxsize=None)
def _pair_masks(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i - 1, j - 1) for i, j in pair_list(n))


def adjacency_from_code(n: int, code: int) -> list[int]:
    adj = [0] * n
    b = 0
    pairs = _pair_masks(n)
    while code:
        if code & 1:
            i, j = pairs[b]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        code >>= 1
        b += 1
    return adj


def graph_from_index(n: int, code: int) -> LabeledGraph:
    """The graph whose edge bitset is ``code``."""
    _check_n(n)
    if not 0 <= code < (1 << num_pairs(n)):
        raise ValueError(f"code {code} outside [0, 2^{num_pairs(n)})")
    return LabeledGraph(n, code)


def index_of_graph(g: LabeledGraph) -> int:
    return g.code


def neighbors(g: LabeledGraph, v: int) -> frozenset[int]:
    if not 1 <= v <= g.n:
        raise ValueError(f"vertex {v} outside 1..{g.n}")
    row = g.adjacency[v - 1]
    return frozenset(u + 1 for u in range(g.n) if row >> u & 1)


def complete_graph(n: int) -> LabeledGraph:
    return LabeledGraph(n, (1 << num_pairs(n)) - 1)


def empty_graph(n: int) -> LabeledGraph:
    return LabeledGraph(n, 0)


def path_graph(n: int) -> LabeledGraph:
    return LabeledGraph.from_edges(n, ((i, i + 1) for i in range(1, n)))


def cycle_graph(n: int) -> LabeledGraph:
    return LabeledGraph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


# graph6 ---------------------------------------------------------------------


def to_graph6(g: LabeledGraph) -> bytes:
    """Standard graph6 encoding (no ``>>graph6<<`` header)."""
    n = g.n
    out = bytearray([n + 63])
    adj = g.adjacency
    bits = [adj[i] >> j & 1 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for p in range(0, len(bits), 6):
        v = 0
        for b in bits[p:p + 6]:
            v = (v << 1) | b
        out.append(v + 63)
    return bytes(out)


def from_graph6(s: bytes | str) -> LabeledGraph:
    if isinstance(s, str):
        s = s.encode("ascii")
    s = s.rstrip(b"\n")
    if s.startswith(b">>graph6<<"):
        s = s[10:]
    if not s:
        raise Graph6Error("empty graph6 string", 0)
    for off, c in enumerate(s):
        if not 63 <= c <= 126:
            raise Graph6Error(f"byte {c!r} outside the printable graph6 range 63..126", off)
    n = s[0] - 63
    if n == 63:
        raise Graph6Error(f"multi-byte vertex count; only n <= {MAX_N} supported", 0)
    if not 1 <= n <= MAX_N:
        raise Graph6Error(f"vertex count {n} not in 1..{MAX_N}", 0)
    nbits = num_pairs(n)
    expected = 1 + (nbits + 5) // 6
    if len(s) != expected:
        raise Graph6Error(f"expected {expected} bytes for n={n}, got {len(s)}", min(len(s), expected))
    adj = [0] * n
    pos = 0
    for j in range(1, n):
        for i in range(j):
            byte = s[1 + pos // 6] - 63
            if byte >> (5 - pos % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            pos += 1
    if nbits % 6:
        pad = (s[-1] - 63) & ((1 << (6 - nbits % 6)) - 1)
        if pad:
            raise Graph6Error("nonzero padding bits", len(s) - 1)
    return LabeledGraph.from_adjacency(adj)


def write_graph6_stream(graphs: Iterable[LabeledGraph], fh: IO[str]) -> int:
    count = 0
    for g in graphs:
        fh.write(to_graph6(g).decode("ascii") + "\n")
        count += 1
    return count


def read_graph6_stream(fh: IO[str]) -> Iterator[LabeledGraph]:
    for line in fh:
        line = line.strip()
        if line:
            yield from_graph6(line)
