"""Exact independence number, t-bounded chromatic number and colouring counts."""
from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations

from .constants import DEFAULTS
from .errors import BudgetExceeded, DomainError
from .graphs import BitGraph, bits, pair_index, popcount
from .profiles import Profile

COUNT_MAX_N = 12


def _colour_sort(cand: int, adj: list[int]) -> list[tuple[int, int]]:
    """Greedy colouring of the candidate set in the clique graph ``adj``.

    Returns (vertex, colour number) with colour numbers nondecreasing; the
    number bounds the clique size achievable from that vertex onwards.
    """
    out = []
    colour = 0
    rest = cand
    while rest:
        colour += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~adj[v] & ~(1 << v)
            rest &= ~(1 << v)
            out.append((v, colour))
    return out


def max_clique(adj: list[int], n: int) -> int:
    """Clique number by branch and bound with greedy colouring bounds."""
    best = 0

    def expand(cand: int, size: int):
        nonlocal best
        order = _colour_sort(cand, adj)
        for v, bound in reversed(order):
            if size + bound <= best:
                return
            nxt = cand & adj[v]
            if nxt:
                expand(nxt, size + 1)
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)

    if n:
        expand((1 << n) - 1, 0)
    return best


def clique_number(g: BitGraph) -> int:
    return max_clique(g.adj, g.n)


def independence_number(g: BitGraph) -> int:
    """alpha(G), as the clique number of the complement.

    Colour classes of the complement are cliques of G, so the bound is a
    greedy clique cover.
    """
    return max_clique(g.complement().adj, g.n)


def degeneracy_order(g: BitGraph) -> list[int]:
    """Vertices by repeatedly removing a minimum-degree vertex (lowest index on ties), reversed."""
    alive = (1 << g.n) - 1
    removed = []
    while alive:
        v = min(bits(alive), key=lambda w: (popcount(g.adj[w] & alive), w))
        removed.append(v)
        alive &= ~(1 << v)
    return removed[::-1]


def _greedy_bounded(g: BitGraph, t: int, order: list[int]) -> int:
    classes: list[int] = []
    sizes: list[int] = []
    for v in order:
        for c, members in enumerate(classes):
            if sizes[c] < t and not members & g.adj[v]:
                classes[c] |= 1 << v
                sizes[c] += 1
                break
        else:
            classes.append(1 << v)
            sizes.append(1)
    return len(classes)


class _Search:
    def __init__(self, g: BitGraph, t: int, order: list[int], budget: float):
        self.g, self.t, self.order, self.budget = g, t, order, budget
        self.nodes = 0
        self.full = (1 << g.n) - 1

    def colourable(self, k: int) -> bool:
        g, t, order, n = self.g, self.t, self.order, self.g.n
        adj = g.adj
        classes = [0] * k
        blocked = [0] * k   # vertices adjacent to a member of the class
        sizes = [0] * k
        suffix = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] | (1 << order[i])

        def rec(idx: int, used: int) -> bool:
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfBudget
            if idx == n:
                return True
            rest = suffix[idx]
            free = sum(t - sizes[c] for c in range(used)) + (k - used) * t
            if free < n - idx:
                return False
            if used == k:
                dead = rest
                for c in range(k):
                    dead &= blocked[c] if sizes[c] < t else self.full
                    if not dead:
                        break
                if dead:
                    return False
            v = order[idx]
            bit = 1 << v
            for c in range(used):
                if sizes[c] < t and not blocked[c] & bit:
                    classes[c] |= bit
                    sizes[c] += 1
                    old = blocked[c]
                    blocked[c] |= adj[v]
                    if rec(idx + 1, used):
                        return True
                    blocked[c] = old
                    sizes[c] -= 1
                    classes[c] ^= bit
            if used < k:
                classes[used], sizes[used], blocked[used] = bit, 1, adj[v]
                if rec(idx + 1, used + 1):
                    return True
                classes[used], sizes[used], blocked[used] = 0, 0, 0
            return False

        return rec(0, 0)


class _OutOfBudget(Exception):
    pass


def chi_bounded(g: BitGraph, t: int, budget: float | None = None) -> int:
    """chi_t(G): fewest colours in a proper colouring with classes of size <= t.

    Branch and bound over vertices in degeneracy order. A new colour is only
    opened at index ``used``, which removes colour permutations. Raises
    BudgetExceeded with the best bounds when more than ``budget`` search nodes
    are needed.
    """
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    n = g.n
    if n == 0:
        return 0
    budget = DEFAULTS["chi_node_budget"] if budget is None else budget
    t = min(t, n)
    order = degeneracy_order(g)
    lower = max(-(-n // t), clique_number(g))
    upper = _greedy_bounded(g, t, order)
    search = _Search(g, t, order, budget)
    k = lower
    try:
        while k < upper:
            if search.colourable(k):
                return k
            k += 1
    except _OutOfBudget:
        raise BudgetExceeded(f"chi_t search exceeded {budget:g} nodes", lower=k, upper=upper) from None
    return upper


def chromatic_number(g: BitGraph, budget: float | None = None) -> int:
    return chi_bounded(g, max(g.n, 1), budget)


@lru_cache(maxsize=64)
def partition_masks(n: int, items: tuple[tuple[int, int], ...]) -> tuple[int, ...]:
    """Internal-pair bitsets of every unordered partition with the given profile.

    ``items`` are (u, k_u) pairs; parts of equal size are listed with
    increasing minimum vertex so each unordered partition appears once.
    """
    idx = pair_index(n)
    sizes = [u for u, k in sorted(items, reverse=True) for _ in range(k)]
    out: list[int] = []

    def part_mask(part) -> int:
        return sum(1 << idx[pr] for pr in combinations(part, 2))

    def rec(i: int, free: tuple[int, ...], last_min: int, acc: int):
        if i == len(sizes):
            out.append(acc)
            return
        u = sizes[i]
        floor_ = last_min if i and sizes[i - 1] == u else -1
        for pos, v in enumerate(free):
            if v <= floor_:
                continue
            later = free[pos + 1:]
            for others in combinations(later, u - 1):
                part = (v,) + others
                taken = set(part)
                rest = tuple(w for w in free if w not in taken)
                rec(i + 1, rest, v, acc | part_mask(part))

    rec(0, tuple(range(n)), -1, 0)
    return tuple(out)


def count_colourings(g: BitGraph, pr: Profile, ordered: bool = True) -> int:
    """Exact number of colourings of ``g`` with profile ``pr`` (n <= 12)."""
    if g.n > COUNT_MAX_N:
        raise DomainError(f"count_colourings is limited to n <= {COUNT_MAX_N}")
    if pr.n != g.n:
        raise DomainError(f"profile has n={pr.n} but the graph has n={g.n}")
    e = g.pair_mask()
    count = sum(1 for m in partition_masks(g.n, pr.items) if not m & e)
    if ordered:
        count *= math.prod(math.factorial(k) for _, k in pr.items)
    return count
