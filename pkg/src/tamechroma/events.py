"""Structural events of a partition in a graph, and overlap of two partitions.

Sets S are z-composed with respect to a partition when they meet exactly z of
its parts. The events A, B, C, D restrict which independent sets a colouring
may leave behind; a pair of partitions is relevant when each one, read as a
colouring, is compatible with those events for the other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .constants import DEFAULTS
from .errors import BudgetExceeded, DomainError
from .graphs import BitGraph, OrderedPartition, bits, popcount, rng_for
from .iset import GraphParams, alpha
from .second_moment import OverlapSpec

LABELS = ("identical", "scrambled", "exceptional")


def z_composed(S: int, pi: OrderedPartition) -> int:
    """Number of parts of ``pi`` that meet ``S``."""
    if S & ~pi.covered:
        raise DomainError("S contains a vertex that pi does not cover")
    return sum(1 for p in pi.parts if p & S)


def ln3_bound(n: int) -> int:
    return math.ceil(math.log(n) ** 3) if n > 1 else 0


def default_levels(n: int, alpha_: int | None = None) -> tuple[int, int, int]:
    """(alpha, u*, a) with the conventions u* = ceil(0.9 alpha), a = alpha - 2."""
    al = alpha(GraphParams(n)) if alpha_ is None else alpha_
    return al, math.ceil(0.9 * al), al - 2


def independent_sets(g: BitGraph, lo: int, hi: int, within: int | None = None,
                     budget: float = math.inf):
    """Every independent set S inside ``within`` with lo <= |S| <= hi."""
    within = (1 << g.n) - 1 if within is None else within
    adj = g.adj
    seen = 0

    def rec(S: int, size: int, cand: int):
        nonlocal seen
        seen += 1
        if seen > budget:
            raise BudgetExceeded(f"independent-set enumeration exceeded {budget:g} nodes")
        if size >= lo:
            yield S
        if size == hi or size + popcount(cand) < lo:
            return
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            yield from rec(S | (1 << v), size + 1, cand & ~adj[v])

    if hi >= 0 and lo <= hi:
        yield from rec(0, 0, within)


def _sampled_sets(g: BitGraph, lo: int, hi: int, within: int, samples: int, seed: int):
    """Independent sets grown greedily along random vertex orders."""
    if lo > hi:
        return
    rng = rng_for(seed)
    verts = list(bits(within))
    for _ in range(samples):
        target = int(rng.integers(lo, hi + 1))
        S, size = 0, 0
        for v in rng.permutation(verts):
            v = int(v)
            if not g.adj[v] & S:
                S |= 1 << v
                size += 1
                if size == target:
                    yield S
                    break


def _intersections(S: int, pi: OrderedPartition) -> list[int]:
    return [popcount(p & S) for p in pi.parts if p & S]


@dataclass
class EventReport:
    A: bool
    B: bool
    C: bool
    D: bool
    alpha: int
    u_star: int
    a: int
    sets_checked: int
    d_count: int
    d_bound: int
    sampled: bool = False
    witnesses: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"A": self.A, "B": self.B, "C": self.C, "D": self.D}


def check_events(g: BitGraph, pi: OrderedPartition, u_star: int | None = None,
                 a: int | None = None, alpha_: int | None = None,
                 sample: int | None = None, seed: int = 0) -> EventReport:
    """Evaluate A, B, C and D for ``pi`` in ``g``.

    Independent sets with u* <= |S| <= a are enumerated exhaustively when
    n <= 30. Larger graphs need ``sample`` (a number of random greedy sets),
    and the report is then marked as sampled: B and C can only be refuted and
    the D count is a lower bound. Sets touching uncovered vertices are skipped.
    """
    if g.n != pi.n:
        raise DomainError("graph and partition disagree on n")
    al, us, aa = default_levels(g.n, alpha_)
    us = us if u_star is None else u_star
    aa = aa if a is None else a
    A = pi.is_colouring(g)
    within = pi.covered
    sampled = g.n > DEFAULTS["event_enum_max_n"]
    if sampled:
        if not sample:
            raise BudgetExceeded(f"n = {g.n} needs sampling; pass a sample count")
        sets = _sampled_sets(g, us, aa, within, sample, seed)
    else:
        sets = independent_sets(g, us, aa, within)
    B = C = True
    d_count = 0
    checked = 0
    wit: dict = {}
    for S in sets:
        checked += 1
        size = popcount(S)
        inter = _intersections(S, pi)
        z = len(inter)
        if not (z <= 2 or z >= size - 2 * (al - size) - 1):
            if B:
                wit["B"] = S
            B = False
        if z == 2:
            if sorted(inter) != [1, size - 1]:
                if C:
                    wit["C"] = S
                C = False
            if any(popcount(p & S) >= popcount(p) - 1 for p in pi.parts):
                d_count += 1
    d_bound = ln3_bound(g.n)
    return EventReport(A, B, C, d_count <= d_bound, al, us, aa, checked, d_count, d_bound,
                       sampled, wit)


def _check_complete_pair(pi: OrderedPartition, pi2: OrderedPartition):
    if pi.n != pi2.n:
        raise DomainError("partitions live on different vertex sets")
    if sorted(pi.sizes()) != sorted(pi2.sizes()):
        raise DomainError("partitions have different profiles")


def overlap_matrix(pi: OrderedPartition, pi2: OrderedPartition) -> list[list[int]]:
    """M[i][j] = |V_i cap V'_j|."""
    return [[popcount(p & q) for q in pi2.parts] for p in pi.parts]


def overlap_counts(pi: OrderedPartition, pi2: OrderedPartition):
    """(ell, r, r1): identical parts by size, blocks keyed (x, u, v) for x >= 2, and 1-blocks."""
    _check_complete_pair(pi, pi2)
    ell: dict[int, int] = {}
    r: dict[tuple[int, int, int], int] = {}
    r1 = 0
    for p in pi.parts:
        u = popcount(p)
        for q in pi2.parts:
            x = popcount(p & q)
            if not x:
                continue
            if p == q:
                ell[u] = ell.get(u, 0) + 1
            elif x == 1:
                r1 += 1
            else:
                key = (x, u, popcount(q))
                r[key] = r.get(key, 0) + 1
    return ell, r, r1


def overlap_of(pi: OrderedPartition, pi2: OrderedPartition, a: int | None = None) -> OverlapSpec:
    """ell_u and r_x^{u,v} of a pair of complete partitions with the same profile."""
    full = (1 << pi.n) - 1
    if pi.covered != full or pi2.covered != full:
        raise DomainError("overlap_of needs complete partitions")
    ell, r, _ = overlap_counts(pi, pi2)
    return OverlapSpec(pi.profile(), ell, r, a)


def _side_ok(pi: OrderedPartition, pi2: OrderedPartition, al: int) -> bool:
    """Conditions 1-3 for the parts of pi2 measured against pi."""
    special = 0
    for q in pi2.parts:
        u = popcount(q)
        inter = _intersections(q, pi)
        z = len(inter)
        if not (z <= 2 or z >= u - 2 * (al - u) - 1):
            return False
        if z == 2:
            if sorted(inter) != [1, u - 1]:
                return False
            if any(popcount(q & p) >= popcount(p) - 1 for p in pi.parts):
                special += 1
    return special <= ln3_bound(pi.n)


def is_relevant(pi: OrderedPartition, pi2: OrderedPartition, alpha_: int | None = None) -> bool:
    """Whether (pi, pi2) is a relevant pair: conditions 1-3 both ways round."""
    _check_complete_pair(pi, pi2)
    al = alpha(GraphParams(pi.n)) if alpha_ is None else alpha_
    return _side_ok(pi, pi2, al) and _side_ok(pi2, pi, al)


def part_cases(pi: OrderedPartition, pi2: OrderedPartition, alpha_: int | None = None) -> list[set[str]]:
    """For each part of pi, the set of cases a-e that apply to it.

    a: equal to a part of pi2. b: at least (u - 2(alpha-u) - 1)-composed.
    c: 1-composed and one vertex short of a part of pi2. d: 2-composed and
    one vertex more than a part of pi2. e: differs from some part of pi2 by
    one vertex each way.
    """
    _check_complete_pair(pi, pi2)
    al = alpha(GraphParams(pi.n)) if alpha_ is None else alpha_
    out = []
    for p in pi.parts:
        u = popcount(p)
        z = z_composed(p, pi2)
        cases = set()
        for q in pi2.parts:
            if p == q:
                cases.add("a")
            if z == 1 and p & ~q == 0 and popcount(q & ~p) == 1:
                cases.add("c")
            if z == 2 and q & ~p == 0 and popcount(p & ~q) == 1:
                cases.add("d")
            if popcount(q & ~p) == 1 and popcount(p & ~q) == 1:
                cases.add("e")
        if z >= u - 2 * (al - u) - 1:
            cases.add("b")
        out.append(cases)
    return out


def classify_parts(pi: OrderedPartition, pi2: OrderedPartition, alpha_: int | None = None) -> list[str | None]:
    """identical / scrambled / exceptional for each part of pi, None if no case applies.

    When several cases apply (possible only outside relevant pairs or at
    tiny alpha), identical takes precedence, then exceptional.
    """
    labels = []
    for cases in part_cases(pi, pi2, alpha_):
        if "a" in cases:
            labels.append("identical")
        elif cases & {"c", "d", "e"}:
            labels.append("exceptional")
        elif "b" in cases:
            labels.append("scrambled")
        else:
            labels.append(None)
    return labels


def ordered_partitions(n: int, sizes: list[int]):
    """Every ordered complete partition of range(n) with the given part sizes, in order."""
    if sum(sizes) != n:
        raise DomainError("sizes must sum to n")

    def rec(i: int, free: tuple[int, ...], parts: list[int]):
        if i == len(sizes):
            yield OrderedPartition(n, list(parts))
            return
        for combo in combinations(free, sizes[i]):
            mask = sum(1 << v for v in combo)
            rest = tuple(v for v in free if not mask >> v & 1)
            parts.append(mask)
            yield from rec(i + 1, rest, parts)
            parts.pop()

    yield from rec(0, tuple(range(n)), [])
