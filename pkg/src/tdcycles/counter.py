"""Counting ordered pairs of consistent matchings over an elimination forest.

``compute_p(ctx, v, J)`` evaluates the branching recursion: every vertex
chooses which of its two requirement labels join the forbidden set, its
up-edges contribute ``1 + x w^wt + y w^wt`` factors filtered by that set, and
the children are multiplied in.  The coefficient of
``x^(l/2) y^(l/2) z^(n-l) w^wt`` at the root is the number of ordered pairs
``(M1, M2)`` of disjoint matchings of size ``l/2`` with ``V(M1) == V(M2)``
and total weight ``wt``.

Label sets are bitmasks indexed by forest depth: the ancestor at depth
``d`` (root depth 1) owns bit ``2(d-1)`` for its first-matching label and bit
``2(d-1)+1`` for its second-matching label.  Ancestors of a vertex have
pairwise distinct depths, so the mask never needs rebasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import (
    EliminationForest,
    Graph,
    GraphError,
    ancestor_path,
    components,
    restrict_forest,
    up_edge_index,
    validate_forest,
)
from .poly import CoeffRing, DegreeCaps, PolySpace, TruncPoly, add_into, mul_terms


# local summand tables hold up to 4**(up-edges + 1) entries per vertex
LOCAL_TABLE_MAX_UP_EDGES = 5


class CountingError(ValueError):
    pass


@dataclass
class CallStats:
    calls: int = 0
    max_depth: int = 0
    # filled only when the context is built with record_calls=True
    seen: Optional[set] = None
    duplicates: int = 0


@dataclass
class CountingContext:
    """Everything one evaluation of the recursion needs.

    ``weights[i]`` is the weight of ``graph.edges[i]``.  Per-vertex tables
    (label bits, up-edge factors, children) are precomputed on construction.
    """

    graph: Graph
    forest: EliminationForest
    weights: Sequence[int]
    caps: DegreeCaps
    ring: CoeffRing
    record_calls: bool = False
    validate: bool = True
    stats: CallStats = field(default_factory=CallStats)

    def __post_init__(self):
        g, f = self.graph, self.forest
        if len(self.weights) != g.m:
            raise CountingError("one weight per edge expected")
        if any(w < 1 for w in self.weights):
            raise CountingError("edge weights must be positive integers")
        if self.validate:
            check = validate_forest(g, f)
            if not check:
                raise GraphError(check.message)
        if self.record_calls:
            self.stats.seen = set()
        self.space = PolySpace(self.caps, self.ring)
        sp = self.space
        cx, cy = self.caps.x, self.caps.y
        self.z_key = sp.pack(0, 0, 1, 0) if self.caps.z >= 1 else None
        self.minus_one = self.ring.reduce(-1)
        depth = [f.depth_of(v) for v in range(g.n + 1)]
        self.first_bit = [0] + [1 << (2 * (depth[v] - 1)) for v in range(1, g.n + 1)]
        self.second_bit = [b << 1 for b in self.first_bit]
        self.children = [f.children(v) for v in range(g.n + 1)]
        # up-edge factors: (first-label mask, second-label mask, x term key, y term key)
        self.factors: list[list[tuple]] = []
        for v, ups in enumerate(up_edge_index(g, f)):
            row = []
            for a, i in ups:
                wt = self.weights[i]
                xk = sp.pack(1, 0, 0, wt) if cx >= 1 and wt <= self.caps.w else None
                yk = sp.pack(0, 1, 0, wt) if cy >= 1 and wt <= self.caps.w else None
                row.append((self.first_bit[a] | self.first_bit[v],
                            self.second_bit[a] | self.second_bit[v], xk, yk))
            self.factors.append(row)

        self.relevant = [0] * (g.n + 1)
        for v in range(1, g.n + 1):
            m = self.first_bit[v] | self.second_bit[v]
            for m1, m2, _, _ in self.factors[v]:
                m |= m1 | m2
            self.relevant[v] = m
        self._local: list[dict] = [{} for _ in range(g.n + 1)]
        self._leaf: list[dict] = [{} for _ in range(g.n + 1)]

    def local_summands(self, v: int, J: int) -> tuple:
        """The four per-branch summands before the children are multiplied
        in: sign, the optional ``(1 + z)`` and the up-edge factors.  They only
        depend on the label bits of ``v`` and its up-neighbours, so they are
        tabulated per vertex on first use."""
        key = J & self.relevant[v]
        table = self._local[v]
        hit = table.get(key)
        if hit is None:
            hit = self._build_local(v, key)
            if len(self.factors[v]) <= LOCAL_TABLE_MAX_UP_EDGES:
                table[key] = hit
        return hit

    def leaf_poly(self, v: int, J: int) -> dict:
        """``P_(v)(J)`` of a leaf: the sum of its four local summands, with no
        children to multiply in.  Tabulated like the local summands.  The
        returned dict is shared and must not be mutated."""
        key = J & self.relevant[v]
        table = self._leaf[v]
        hit = table.get(key)
        if hit is None:
            hit = {}
            for summand in self._build_local(v, key):
                add_into(hit, summand, self.ring.mask)
            if len(self.factors[v]) <= LOCAL_TABLE_MAX_UP_EDGES:
                table[key] = hit
        return hit

    def _build_local(self, v: int, J: int) -> tuple:
        sp = self.space
        bias, guard, mask = sp.bias, sp.guard, self.ring.mask
        b1, b2 = self.first_bit[v], self.second_bit[v]
        out = []
        for jv in (0, b1, b2, b1 | b2):
            jp = J | jv
            summand = {0: self.minus_one if jv in (b1, b2) else 1}
            if jv == 0 and self.z_key is not None:
                summand[self.z_key] = 1
            for m1, m2, xk, yk in self.factors[v]:
                factor = {0: 1}
                if xk is not None and not jp & m1:
                    factor[xk] = 1
                if yk is not None and not jp & m2:
                    factor[yk] = 1
                if len(factor) > 1:
                    summand = mul_terms(summand, factor, bias, guard, mask)
            out.append(summand)
        return tuple(out)

    def tail_mask(self, v: int) -> int:
        """Bits of every label that may appear in ``J`` for vertex ``v``."""
        m = 0
        for a in ancestor_path(self.forest, v):
            m |= self.first_bit[a] | self.second_bit[a]
        return m

    def label_mask(self, labels) -> int:
        """Bitmask for labels given in the ``1..2n`` numbering (``v`` is the
        first-matching label of ``v``, ``v+n`` the second)."""
        n, m = self.graph.n, 0
        for lab in labels:
            if 1 <= lab <= n:
                m |= self.first_bit[lab]
            elif n < lab <= 2 * n:
                m |= self.second_bit[lab - n]
            else:
                raise CountingError(f"label {lab} outside 1..{2 * n}")
        return m


def compute_p(ctx: CountingContext, v: int, J=0) -> TruncPoly:
    """``P_(v)(J)``: the contribution of the subtree rooted at ``v``.

    ``J`` is either a bitmask (see module docstring) or an iterable of labels
    in ``1..2n``.  Every label must belong to a strict ancestor of ``v``.
    """
    if not isinstance(J, int):
        J = ctx.label_mask(J)
    if J & ~ctx.tail_mask(v):
        raise CountingError(f"label set {J:#b} reaches outside the ancestors of {v}")
    return TruncPoly(ctx.space, dict(_compute_p(ctx, v, J, 1)))


def _compute_p(ctx: CountingContext, v: int, J: int, level: int) -> dict:
    st = ctx.stats
    st.calls += 1
    if level > st.max_depth:
        st.max_depth = level
    if st.seen is not None:
        key = (v, J)
        if key in st.seen:
            st.duplicates += 1
        st.seen.add(key)

    children = ctx.children[v]
    if not children:
        return ctx.leaf_poly(v, J)
    sp = ctx.space
    bias, guard, mask = sp.bias, sp.guard, ctx.ring.mask
    b1, b2 = ctx.first_bit[v], ctx.second_bit[v]
    local = ctx.local_summands(v, J)
    total: dict = {}
    for jv, summand in zip((0, b1, b2, b1 | b2), local):
        jp = J | jv
        for u in children:
            if not summand:
                break
            summand = mul_terms(summand, _compute_p(ctx, u, jp, level + 1), bias, guard, mask)
        if not summand:
            continue
        if total:
            add_into(total, summand, mask)
        else:
            total = dict(summand)
    return total


# -- weight tables ---------------------------------------------------------

def default_caps(n: int, ell: int, max_weight: int) -> DegreeCaps:
    """Tightest caps that still contain the coefficient row for ``ell``."""
    return DegreeCaps(ell // 2, ell // 2, n - ell, ell * max_weight)


def _check_ell(n: int, ell: int):
    if ell % 2 or ell < 0 or ell > n:
        raise CountingError(f"cover size {ell} must be even and between 0 and {n}")


def count_pairs_connected(
    graph: Graph,
    forest: EliminationForest,
    ell: int,
    weights: Optional[Sequence[int]] = None,
    ring: CoeffRing = CoeffRing.exact(),
    record_calls: bool = False,
    stats: Optional[CallStats] = None,
) -> dict[int, int]:
    """``{weight: |M_{weight, ell}|}`` for a connected graph, zero entries
    omitted.  One root evaluation yields every weight."""
    _check_ell(graph.n, ell)
    weights = list(weights) if weights is not None else graph.weight_list()
    if ell == 0:
        return {0: ring.reduce(1)} if ring.reduce(1) else {}
    roots = forest.roots
    if len(roots) != 1:
        raise CountingError("connected counting needs a forest with a single tree")
    caps = default_caps(graph.n, ell, max(weights, default=1))
    ctx = CountingContext(graph, forest, weights, caps, ring, record_calls=record_calls,
                          stats=stats if stats is not None else CallStats())
    root_poly = compute_p(ctx, roots[0], 0)
    return _row(root_poly, ell, graph.n - ell)


def _row(poly: TruncPoly, ell: int, uncovered: int) -> dict[int, int]:
    h = ell // 2
    return {d: c for (a, b, z, d), c in poly.terms() if a == h and b == h and z == uncovered}


def count_pairs_all(
    graph: Graph,
    forest: EliminationForest,
    max_ell: int,
    weights: Optional[Sequence[int]] = None,
    ring: CoeffRing = CoeffRing.exact(),
    stats: Optional[CallStats] = None,
    min_ell: int = 0,
) -> dict[int, dict[int, int]]:
    """Tables for every even ``ell`` in ``min_ell..max_ell`` of one connected
    graph from a single root evaluation.  The z cap is ``n - min_ell``, so a
    high ``min_ell`` keeps the polynomials small."""
    weights = list(weights) if weights is not None else graph.weight_list()
    top = min(max_ell, graph.n)
    top -= top % 2
    low = max(0, min_ell + min_ell % 2)
    if low > top:
        return {}
    rows = range(low, top + 1, 2)
    if top == 0 or graph.m == 0:
        one = ring.reduce(1)
        return {ell: ({0: one} if ell == 0 and one else {}) for ell in rows}
    roots = forest.roots
    if len(roots) != 1:
        raise CountingError("connected counting needs a forest with a single tree")
    caps = DegreeCaps(top // 2, top // 2, graph.n - low, top * max(weights))
    ctx = CountingContext(graph, forest, weights, caps, ring,
                          stats=stats if stats is not None else CallStats())
    root_poly = compute_p(ctx, roots[0], 0)
    return {ell: _row(root_poly, ell, graph.n - ell) for ell in rows}



def count_pairs(
    graph: Graph,
    forest: EliminationForest,
    ell: int,
    weights: Optional[Sequence[int]] = None,
    ring: CoeffRing = CoeffRing.exact(),
    stats: Optional[CallStats] = None,
) -> dict[int, int]:
    """Like :func:`count_pairs_connected` for arbitrary graphs."""
    _check_ell(graph.n, ell)
    if len(components(graph)) == 1:
        return count_pairs_connected(graph, forest, ell, weights, ring, stats=stats)
    return count_pairs_range(graph, forest, ell, ell, weights, ring, stats).get(ell, {})


def count_pairs_range(
    graph: Graph,
    forest: EliminationForest,
    min_ell: int,
    max_ell: int,
    weights: Optional[Sequence[int]] = None,
    ring: CoeffRing = CoeffRing.exact(),
    stats: Optional[CallStats] = None,
) -> dict[int, dict[int, int]]:
    """Tables for every even ``ell`` in ``min_ell..max_ell`` of an arbitrary
    graph, rows without pairs omitted.

    Each component is counted on its own (with the forest restricted to it)
    and the per-component tables are convolved over weight and cover size.
    """
    weights = list(weights) if weights is not None else graph.weight_list()
    max_ell = min(max_ell, graph.n)
    wmap = {e: weights[i] for i, e in enumerate(graph.edges)}
    # table[size][weight] for the components processed so far
    acc: dict[int, dict[int, int]] = {0: {0: ring.reduce(1)}}
    for sub, verts in components(graph):
        sub_w = [wmap[(verts[u], verts[v])] for u, v in sub.edges]
        sub_f = restrict_forest(forest, verts[1:])
        # the other components leave at most graph.n - sub.n vertices uncovered
        tables = count_pairs_all(sub, sub_f, max_ell, sub_w, ring, stats=stats,
                                 min_ell=min_ell - (graph.n - sub.n))
        nxt: dict[int, dict[int, int]] = {}
        for s1, row1 in acc.items():
            for s2, row2 in tables.items():
                if s1 + s2 > max_ell:
                    continue
                row = nxt.setdefault(s1 + s2, {})
                for w1, c1 in row1.items():
                    for w2, c2 in row2.items():
                        row[w1 + w2] = ring.reduce(row.get(w1 + w2, 0) + c1 * c2)
        acc = {s: {w: c for w, c in row.items() if c} for s, row in nxt.items()}
    return {s: row for s, row in acc.items() if s >= min_ell and row}
