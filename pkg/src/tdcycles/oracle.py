"""Brute-force reference counts.  Exponential on purpose; never used by the
solver itself, only to cross-check it."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional, Sequence

from .graph import Graph

MAX_PAIR_VERTICES = 14
MAX_PAIR_EDGES = 20
MAX_IE_VERTICES = 5
MAX_COVER_VERTICES = 14


class OracleGuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


def _weights(g: Graph, weights) -> list[int]:
    return list(weights) if weights is not None else g.weight_list()


def enumerate_pairs(g: Graph, weights: Optional[Sequence[int]], ell: int) -> dict[int, int]:
    """Ordered pairs of disjoint ``ell/2``-edge matchings covering the same
    vertices, tabulated by total weight (zero entries omitted)."""
    if g.n > MAX_PAIR_VERTICES or g.m > MAX_PAIR_EDGES:
        raise OracleGuardError(f"pair enumeration limited to n <= {MAX_PAIR_VERTICES}, m <= {MAX_PAIR_EDGES}")
    if ell < 0 or ell % 2 or ell > g.n:
        return {}
    ws = _weights(g, weights)
    by_cover = defaultdict(list)
    for sel in combinations(range(g.m), ell // 2):
        verts = [x for i in sel for x in g.edges[i]]
        if len(set(verts)) == len(verts):
            by_cover[frozenset(verts)].append((frozenset(sel), sum(ws[i] for i in sel)))
    table: Counter = Counter()
    for group in by_cover.values():
        for m1, w1 in group:
            for m2, w2 in group:
                if not m1 & m2:
                    table[w1 + w2] += 1
    return dict(table)


def eval_inclusion_exclusion(g: Graph, weights: Optional[Sequence[int]], ell: int, w: int) -> int:
    """Alternating sum over all ``I`` subset of the ``2n`` requirement labels.

    The universe holds triples ``(E1, E2, L)``: disjoint edge sets of size
    ``ell/2`` with total weight ``w`` and a set ``L`` of ``n - ell`` vertices.
    Label ``i <= n`` is satisfied when ``i`` is covered by ``E1`` or lies in
    ``L``; label ``i + n`` likewise with ``E2``.  Each triple is grouped by
    the labels it fails, so ``|intersection of complements over I|`` is the
    number of triples whose failed set contains ``I``.
    """
    n = g.n
    if n > MAX_IE_VERTICES:
        raise OracleGuardError(f"inclusion-exclusion limited to n <= {MAX_IE_VERTICES}")
    if ell < 0 or ell % 2 or ell > n:
        return 0
    ws = _weights(g, weights)
    h = ell // 2
    full = (1 << n) - 1
    failed: Counter = Counter()
    for e1 in combinations(range(g.m), h):
        w1 = sum(ws[i] for i in e1)
        for e2 in combinations([i for i in range(g.m) if i not in e1], h):
            if w1 + sum(ws[i] for i in e2) != w:
                continue
            c1 = _vmask(g, e1)
            c2 = _vmask(g, e2)
            for L in combinations(range(n), n - ell):
                lm = sum(1 << v for v in L)
                # bit v-1: label v fails; bit n+v-1: label v+n fails
                failed[(full & ~(c1 | lm)) | ((full & ~(c2 | lm)) << n)] += 1
    total = 0
    for I in range(1 << (2 * n)):
        size = sum(c for f, c in failed.items() if f & I == I)
        total += -size if bin(I).count("1") % 2 else size
    return total


def _vmask(g: Graph, sel) -> int:
    m = 0
    for i in sel:
        u, v = g.edges[i]
        m |= (1 << (u - 1)) | (1 << (v - 1))
    return m


# -- partial cycle covers --------------------------------------------------

@dataclass(frozen=True)
class Cover:
    edges: frozenset
    vertices: int
    cycles: int
    all_even: bool


@dataclass
class CoverCensus:
    count: int = 0                       # covers on exactly ell vertices with <= k cycles
    cycle_counts: list = field(default_factory=list)  # cycle count of every cover on ell vertices
    even_pair_total: int = 0             # sum of 2**cycles over all-even covers on ell vertices


def iter_cycle_covers(g: Graph, max_vertices: int = MAX_COVER_VERTICES) -> Iterator[Cover]:
    """Every edge set in which each vertex has degree 0 or 2 (the empty set
    included).  Edges are decided in order; a vertex left with degree 1 after
    its last incident edge is decided prunes the branch.

    Subdivided graphs may raise ``max_vertices``: their extra vertices have
    degree two and barely widen the search.
    """
    if g.n > max_vertices:
        raise OracleGuardError(f"cycle cover enumeration limited to n <= {max_vertices}")
    m = g.m
    last = [-1] * (g.n + 1)
    for i, (u, v) in enumerate(g.edges):
        last[u] = last[v] = i
    deg = [0] * (g.n + 1)
    chosen: list[int] = []

    def rec(i):
        if i == m:
            yield _make_cover(g, chosen)
            return
        u, v = g.edges[i]
        if deg[u] < 2 and deg[v] < 2:
            deg[u] += 1
            deg[v] += 1
            chosen.append(i)
            if not ((last[u] == i and deg[u] == 1) or (last[v] == i and deg[v] == 1)):
                yield from rec(i + 1)
            chosen.pop()
            deg[u] -= 1
            deg[v] -= 1
        if not ((last[u] == i and deg[u] == 1) or (last[v] == i and deg[v] == 1)):
            yield from rec(i + 1)

    yield from rec(0)


def _make_cover(g: Graph, chosen: list[int]) -> Cover:
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in chosen:
        for x in g.edges[i]:
            parent.setdefault(x, x)
    for i in chosen:
        a, b = (find(x) for x in g.edges[i])
        if a != b:
            parent[a] = b
    sizes = Counter(find(x) for x in parent)
    return Cover(frozenset(chosen), len(parent), len(sizes), all(s % 2 == 0 for s in sizes.values()))


def enumerate_cycle_covers(g: Graph, ell: int, k: int,
                           max_vertices: int = MAX_COVER_VERTICES) -> CoverCensus:
    census = CoverCensus()
    for cov in iter_cycle_covers(g, max_vertices):
        if cov.vertices != ell:
            continue
        census.cycle_counts.append(cov.cycles)
        if cov.cycles <= k:
            census.count += 1
        if cov.all_even:
            census.even_pair_total += 2 ** cov.cycles
    return census


def decide_pcc_exact(g: Graph, k: int, ell: int) -> bool:
    """Can exactly ``ell`` vertices be covered by at most ``k`` disjoint cycles?"""
    if g.n > MAX_COVER_VERTICES:
        raise OracleGuardError(f"exact decision limited to n <= {MAX_COVER_VERTICES}")
    return any(c.vertices == ell and c.cycles <= k for c in iter_cycle_covers(g))


# -- paths and cycles by plain backtracking --------------------------------

def longest_path_vertices(g: Graph) -> int:
    """Vertex count of a longest simple path (0 for the empty graph)."""
    if g.n > MAX_COVER_VERTICES:
        raise OracleGuardError(f"path search limited to n <= {MAX_COVER_VERTICES}")
    adj = g.adjacency()
    best = 1 if g.n else 0
    on = [False] * (g.n + 1)

    def rec(u, length):
        nonlocal best
        best = max(best, length)
        if best == g.n:
            return
        for w in adj[u]:
            if not on[w]:
                on[w] = True
                rec(w, length + 1)
                on[w] = False

    for s in range(1, g.n + 1):
        on[s] = True
        rec(s, 1)
        on[s] = False
        if best == g.n:
            break
    return best


def cycle_lengths(g: Graph) -> set[int]:
    """Lengths of all simple cycles."""
    return {c.vertices for c in iter_cycle_covers(g) if c.cycles == 1}
