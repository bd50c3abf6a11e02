"""Bitset graphs, ordered partitions and seeded G(n, p) / G(n, m) samplers.

Vertex sets are Python ints used as bitsets. Edge sets are also kept as
bitsets over pair indices, with pairs (i, j), i < j, numbered in
lexicographic order. Random draws use numpy's Philox4x64 counter-based
generator keyed through SeedSequence(seed), so a seed gives the same graph on
every platform.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .profiles import Profile

MAX_N = 256


def bits(mask: int):
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict[tuple[int, int], int]:
    return {pr: i for i, pr in enumerate(pair_list(n))}


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


class BitGraph:
    """Simple undirected graph on range(n) with one neighbour bitset per vertex."""

    __slots__ = ("n", "adj", "_pair_mask")

    def __init__(self, n: int, adj: Sequence[int] | None = None):
        if not 0 <= n <= MAX_N:
            raise DomainError(f"need 0 <= n <= {MAX_N}, got {n}")
        self.n = n
        self.adj = list(adj) if adj is not None else [0] * n
        if len(self.adj) != n:
            raise DomainError("adjacency has the wrong length")
        self._pair_mask = None
        for v, row in enumerate(self.adj):
            if row >> v & 1:
                raise DomainError(f"self-loop at {v}")
            for w in bits(row):
                if w >= n or not self.adj[w] >> v & 1:
                    raise DomainError(f"adjacency not symmetric at ({v}, {w})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> BitGraph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise DomainError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def from_pair_mask(cls, n: int, mask: int) -> BitGraph:
        pairs = pair_list(n)
        g = cls.from_edges(n, (pairs[i] for i in bits(mask)))
        g._pair_mask = mask
        return g

    @classmethod
    def empty(cls, n: int) -> BitGraph:
        return cls(n)

    @classmethod
    def complete(cls, n: int) -> BitGraph:
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def num_edges(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def pair_mask(self) -> int:
        """Edge set as a bitset over lexicographic pair indices."""
        if self._pair_mask is None:
            idx = pair_index(self.n)
            self._pair_mask = sum(1 << idx[e] for e in self.edges())
        return self._pair_mask

    def complement(self) -> BitGraph:
        full = (1 << self.n) - 1
        return BitGraph(self.n, [full ^ row ^ (1 << v) for v, row in enumerate(self.adj)])

    def is_independent(self, mask: int) -> bool:
        return all(not self.adj[v] & mask for v in bits(mask))

    def __eq__(self, other) -> bool:
        return isinstance(other, BitGraph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.adj)))

    def __repr__(self) -> str:
        return f"BitGraph(n={self.n}, m={self.num_edges()})"


def format_graph(g: BitGraph) -> str:
    lines = [f"# n={g.n}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> BitGraph:
    """Edge list `u v`, 0-indexed, after a `# n=<n>` header."""
    n = None
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "n":
                    n = int(val)
            continue
        u, v = line.split()
        edges.append((int(u), int(v)))
    if n is None:
        raise DomainError("graph file lacks the '# n=<n>' header")
    return BitGraph.from_edges(n, edges)


def read_graph(path: str | Path) -> BitGraph:
    return parse_graph(Path(path).read_text())


def write_graph(g: BitGraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g))


class OrderedPartition:
    """Disjoint parts V_1, ..., V_k of range(n), sizes nonincreasing; may be partial."""

    __slots__ = ("n", "parts")

    def __init__(self, n: int, parts: Sequence[int]):
        seen = 0
        prev = None
        for p in parts:
            if p <= 0:
                raise DomainError("parts must be nonempty")
            if p >> n:
                raise DomainError("part contains a vertex outside range(n)")
            if p & seen:
                raise DomainError("parts are not disjoint")
            seen |= p
            size = popcount(p)
            if prev is not None and size > prev:
                raise DomainError("part sizes must be nonincreasing")
            prev = size
        self.n = n
        self.parts = tuple(parts)

    @classmethod
    def from_lists(cls, n: int, parts: Iterable[Iterable[int]]) -> OrderedPartition:
        return cls(n, [sum(1 << v for v in set(p)) for p in parts])

    @property
    def covered(self) -> int:
        out = 0
        for p in self.parts:
            out |= p
        return out

    @property
    def k(self) -> int:
        return len(self.parts)

    def sizes(self) -> list[int]:
        return [popcount(p) for p in self.parts]

    def lists(self) -> list[list[int]]:
        return [list(bits(p)) for p in self.parts]

    def profile(self, t: int | None = None) -> Profile:
        counts: dict[int, int] = {}
        for s in self.sizes():
            counts[s] = counts.get(s, 0) + 1
        return Profile(self.n, counts, t)

    def part_of(self) -> list[int]:
        """Part index of each vertex, -1 when uncovered."""
        owner = [-1] * self.n
        for i, p in enumerate(self.parts):
            for v in bits(p):
                owner[v] = i
        return owner

    def is_colouring(self, g: BitGraph) -> bool:
        return all(g.is_independent(p) for p in self.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, OrderedPartition) and self.n == other.n and self.parts == other.parts

    def __hash__(self) -> int:
        return hash((self.n, self.parts))

    def __repr__(self) -> str:
        return f"OrderedPartition(n={self.n}, {self.lists()})"


def format_partition(pi: OrderedPartition) -> str:
    return "".join(" ".join(map(str, p)) + "\n" for p in pi.lists())


def parse_partition(text: str, n: int) -> OrderedPartition:
    """One part per line, space-separated vertex ids; '#' lines are ignored."""
    parts = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            parts.append([int(tok) for tok in line.split()])
    flat = [v for p in parts for v in p]
    if len(flat) != len(set(flat)):
        raise DomainError("a vertex appears twice in the partition")
    return OrderedPartition.from_lists(n, parts)


def read_partition(path: str | Path, n: int) -> OrderedPartition:
    return parse_partition(Path(path).read_text(), n)


def _check_n(n: int) -> int:
    if not 0 <= n <= MAX_N:
        raise DomainError(f"need 0 <= n <= {MAX_N}, got {n}")
    return n * (n - 1) // 2


def sample_gnp(n: int, p: float, seed: int) -> BitGraph:
    N = _check_n(n)
    if not 0 <= p <= 1:
        raise DomainError(f"need 0 <= p <= 1, got {p}")
    chosen = np.flatnonzero(rng_for(seed).random(N) < p)
    pairs = pair_list(n)
    return BitGraph.from_edges(n, (pairs[i] for i in chosen))


def gnm_indices(N: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """First m entries of a partial Fisher-Yates shuffle of range(N)."""
    idx = np.arange(N)
    if m == 0:
        return idx[:0]
    js = rng.integers(np.arange(m), N)
    for i, j in enumerate(js):
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:m]


def sample_gnm(n: int, m: int, seed: int) -> BitGraph:
    N = _check_n(n)
    if not 0 <= m <= N:
        raise DomainError(f"need 0 <= m <= {N}, got {m}")
    pairs = pair_list(n)
    return BitGraph.from_edges(n, (pairs[i] for i in gnm_indices(N, m, rng_for(seed))))
